#pragma once

// Runs every applicable engine on one finite web and query and relates the
// results to the two-phase oracle.

#include <optional>
#include <string>
#include <vector>

#include "ldq/engines.hpp"

namespace ldq {

struct CompareOptions {
  std::vector<TaskPolicy> policies = {TaskPolicy::Fifo()};
  Expansion expansion = Expansion::kMatchedTriple;
  // Iterator orders: all permutations up to this many patterns, otherwise
  // `sampled_orders` random ones.
  std::size_t max_exhaustive_patterns = 4;
  std::size_t sampled_orders = 24;
  std::uint64_t seed = 0;
};

struct IteratorOutcome {
  std::vector<std::size_t> order;
  std::vector<Valuation> solutions;  // sorted
  bool subset = true;
  bool strict = false;
  EngineStats stats;
};

struct LtbOutcome {
  std::string policy;
  std::vector<Valuation> solutions;  // sorted
  bool equal = true;
  EngineStats stats;
};

struct CompareReport {
  std::vector<Valuation> oracle;  // sorted
  std::vector<Valuation> machine;
  bool machine_equal = true;
  bool machine_exhausted = true;
  std::vector<LtbOutcome> ltb;          // empty unless criterion is Match
  std::vector<IteratorOutcome> iterator;  // empty unless criterion is Match

  bool LtbEqual() const;
  bool IteratorSubset() const;
  bool IteratorStrict() const;
  bool Ok() const { return machine_equal && LtbEqual() && IteratorSubset(); }
  std::string Summary() const;
};

// Throws InfiniteWeb unless w is finite.
CompareReport CompareEngines(const Web& w, const QuerySpec& q,
                             const CompareOptions& options = {});

}  // namespace ldq
