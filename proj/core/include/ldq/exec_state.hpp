#pragma once

// State of a link-traversal execution: partial solutions, the discovered
// part of the web, augmentation, valuation-driven expansion, and the queue
// of augment-and-expand (AE) tasks.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ldq/query.hpp"
#include "ldq/terms.hpp"
#include "ldq/web.hpp"

namespace ldq {

// Receives one line per traced event: `DEREF <u> <doc|none>`,
// `TASK <n> σ=<...> t=<...> tp=<...>`, `SOLUTION <valuation>`.
using TraceSink = std::function<void(const std::string&)>;

// (B', μ): `covered` has bit i set iff pattern i of the query is in B'.
struct PartialSolution {
  std::uint64_t covered = 0;
  Valuation valuation;

  bool Covers(std::size_t pattern) const {
    return (covered >> pattern) & 1U;
  }
  std::size_t covered_count() const;
  bool CoversAll(const Bqp& b) const;

  // `[0,2] ?x=a ?y=b`
  std::string ToString() const;

  friend bool operator==(const PartialSolution&,
                         const PartialSolution&) = default;
};

}  // namespace ldq

template <>
struct std::hash<ldq::PartialSolution> {
  std::size_t operator()(const ldq::PartialSolution& p) const noexcept {
    return ldq::HashCombine(std::hash<std::uint64_t>{}(p.covered),
                            std::hash<ldq::Valuation>{}(p.valuation));
  }
};

namespace ldq {

// σ0 = (∅, μ∅).
PartialSolution EmptyPartial();

// The finite part of the web known so far. Grows monotonically; every
// identifier is looked up at most once and misses are remembered.
class DiscoveredPart {
 public:
  DiscoveredPart() = default;

  bool WasLookedUp(const Identifier& u) const {
    return deref_log_.contains(u);
  }

  // Dereferences u unless it was looked up before. Returns the number of
  // triples that were new to the discovered data.
  std::size_t Lookup(const Web& w, const Identifier& u,
                     const TraceSink* trace = nullptr);

  // Discovered data, duplicate-free, in discovery order (documents in
  // lookup order, each document's triples in triple order).
  std::span<const Triple> triples() const { return triples_; }
  bool ContainsTriple(const Triple& t) const {
    return triple_set_.contains(t);
  }

  const std::vector<DocumentPtr>& documents() const { return documents_; }
  bool ContainsDocument(const DocumentId& id) const {
    return document_set_.contains(id);
  }
  std::vector<DocumentId> DocumentIds() const;

  // Identifier -> document it dereferenced to, or nullopt for a miss.
  const std::map<Identifier, std::optional<DocumentId>>& deref_log() const {
    return deref_log_;
  }
  std::size_t deref_count() const { return deref_log_.size(); }

 private:
  std::map<Identifier, std::optional<DocumentId>> deref_log_;
  std::vector<DocumentPtr> documents_;
  std::unordered_set<DocumentId> document_set_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple> triple_set_;
};

// D_init: the documents of the seeds, looked up in order.
DiscoveredPart InitialDiscovered(const Web& w,
                                 std::span<const Identifier> seeds,
                                 const TraceSink* trace = nullptr);

// Identifiers bound in μ that have not been looked up yet, in variable
// order, each once.
std::vector<Identifier> ExpansionTargets(const DiscoveredPart& d,
                                         const Valuation& mu);

// The μ-expansion of d in w: looks up every identifier bound in μ.
DiscoveredPart MuExpand(DiscoveredPart d, const Valuation& mu, const Web& w);
void MuExpandInPlace(DiscoveredPart& d, const Valuation& mu, const Web& w,
                     const TraceSink* trace = nullptr);

// The (t, tp)-augmentation of σ in d, where tp = b[pattern]. Returns nullopt
// unless tp is uncovered, t is discovered, t matches tp and the match agrees
// with σ on shared variables.
std::optional<PartialSolution> TryAugment(const PartialSolution& sigma,
                                          const Triple& t,
                                          std::size_t pattern, const Bqp& b,
                                          const DiscoveredPart& d);

// As TryAugment, but throws NotApplicable.
PartialSolution Augment(const PartialSolution& sigma, const Triple& t,
                        std::size_t pattern, const Bqp& b,
                        const DiscoveredPart& d);

// (σ, t, tp) by position: σ in ExecutionState::partials(), t in the
// discovered triples, tp in the query pattern.
struct AeTask {
  std::size_t partial = 0;
  std::size_t triple = 0;
  std::size_t pattern = 0;

  friend bool operator==(const AeTask&, const AeTask&) = default;
};

// (𝔓, 𝔇) plus the open-task queue.
class ExecutionState {
 public:
  ExecutionState(Bqp pattern, DiscoveredPart discovered);

  const Bqp& pattern() const { return pattern_; }
  const std::vector<PartialSolution>& partials() const { return partials_; }
  bool HasPartial(const PartialSolution& p) const {
    return partial_set_.contains(p);
  }
  // Returns the index of p; `inserted` tells whether it was new.
  std::size_t AddPartial(PartialSolution p, bool* inserted = nullptr);

  DiscoveredPart& discovered() { return discovered_; }
  const DiscoveredPart& discovered() const { return discovered_; }

  std::deque<AeTask>& open_queue() { return open_queue_; }
  const std::deque<AeTask>& open_queue() const { return open_queue_; }

  // Appends every task newly enabled by a delta: (a) the partial at
  // `new_partial` against all discovered triples, and (b) all other
  // partials against the discovered triples from index `first_new_triple`
  // on. Only candidates that match and agree with σ are queued. Returns the
  // number appended. Call after the discovered part has been extended.
  std::size_t EnqueueDelta(std::optional<std::size_t> new_partial,
                           std::size_t first_new_triple);

  // Augmentation of a queued task; nullopt if it is not applicable.
  std::optional<PartialSolution> AugmentationOf(const AeTask& task) const;

  // Checks the task conditions against the current state: tp uncovered,
  // t discovered, t matching tp and agreeing with the partial solution.
  bool IsAeTask(const AeTask& task) const;
  // AE task whose augmentation is not yet a partial solution.
  bool IsOpen(const AeTask& task) const;

  std::string Describe(const AeTask& task) const;

  std::unordered_set<Valuation>& emitted() { return emitted_; }

 private:
  // Triples matching each pattern, kept in step with the discovered part.
  void IndexNewTriples();

  Bqp pattern_;
  DiscoveredPart discovered_;
  std::vector<PartialSolution> partials_;
  std::unordered_map<PartialSolution, std::size_t> partial_set_;
  std::deque<AeTask> open_queue_;
  std::unordered_set<Valuation> emitted_;
  std::vector<std::vector<std::size_t>> matches_;  // pattern -> triples
  std::size_t indexed_triples_ = 0;
};

}  // namespace ldq
