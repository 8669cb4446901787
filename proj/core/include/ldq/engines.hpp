#pragma once

// Query engines. Each engine is a pull-based stream of solutions:
//
//   machine   Re-evaluates the whole pattern over everything looked up so far,
//             then follows exactly one more link allowed by the criterion.
//             Works for any criterion; halts iff the reachable part is finite.
//   ltb       Performs open augment-and-expand tasks until none is left.
//             Match criterion only.
//   iterator  A chain of blocking GetNext operators, one per pattern in a
//             fixed order. Match criterion only; always terminates, but may
//             miss solutions.
//   oracle    Two-phase reference evaluation, exposed as a stream.
//
// Budgets turn non-termination into an explicit BudgetStop. A stream never
// yields the same valuation twice, and for a fixed web, query and options
// the solutions under a smaller budget are a prefix of those under a larger
// one.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldq/errors.hpp"
#include "ldq/exec_state.hpp"
#include "ldq/query.hpp"
#include "ldq/web.hpp"

namespace ldq {

struct Budget {
  std::optional<std::size_t> max_derefs;
  std::optional<std::size_t> max_tasks;
  std::optional<std::size_t> max_solutions;
  std::optional<std::size_t> max_rounds;  // machine engine

  bool Unbounded() const {
    return !max_derefs && !max_tasks && !max_solutions && !max_rounds;
  }
};

// Order in which the ltb engine picks open tasks.
struct TaskPolicy {
  enum class Kind { kFifo, kLifo, kRandom };

  Kind kind = Kind::kFifo;
  std::uint64_t seed = 0;

  static TaskPolicy Fifo() { return {}; }
  static TaskPolicy Lifo() { return {Kind::kLifo, 0}; }
  static TaskPolicy Random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
  // "fifo", "lifo" or "random:<seed>". Throws InvalidValue.
  static TaskPolicy FromName(std::string_view name);
  std::string name() const;
};

// What a performed task dereferences.
enum class Expansion {
  // The identifiers bound by the new valuation only.
  kValuation,
  // Those plus the remaining identifiers of the matched triple. Following
  // the constants of a matched triple is what Match reachability allows, and
  // without it links through constant pattern positions are never followed.
  kMatchedTriple,
};

struct EngineOptions {
  TaskPolicy policy;
  Expansion expansion = Expansion::kMatchedTriple;
  TraceSink trace;
};

struct EngineStats {
  std::size_t derefs = 0;     // lookups issued, hits and misses
  std::size_t documents = 0;  // distinct documents retrieved
  std::size_t tasks = 0;      // ltb: tasks performed; iterator: augmentations
  std::size_t rounds = 0;     // machine: loop iterations started
  std::size_t partials = 0;   // partial solutions created
};

struct EngineRun {
  std::string engine;
  std::vector<Valuation> solutions;  // emission order, duplicate-free
  bool exhausted = false;  // the engine's own termination condition fired
  std::string stop_reason;  // set when a budget stopped the run
  EngineStats stats;
};

// Thrown by the Run* helpers when a budget stops the run before the engine
// terminates. Carries everything produced so far.
class BudgetExhausted : public Error {
 public:
  explicit BudgetExhausted(EngineRun run)
      : Error(run.engine + " stopped by budget: " + run.stop_reason),
        run_(std::move(run)) {}

  const EngineRun& run() const { return run_; }

 private:
  EngineRun run_;
};

struct Exhausted {};
struct BudgetStop {
  std::string reason;
};
using StreamItem = std::variant<Valuation, Exhausted, BudgetStop>;

class SolutionStream {
 public:
  virtual ~SolutionStream() = default;

  // The next solution, or the reason there is none. Exhausted and
  // BudgetStop are sticky.
  virtual StreamItem Next() = 0;
  virtual EngineStats stats() const = 0;
  virtual std::string name() const = 0;
};

// The streams keep a reference to `w`, which must outlive them.
// Throws BudgetRequired for an unbounded run that may not terminate, and
// UnsupportedCriterion (ltb, iterator) unless the criterion is Match.
std::unique_ptr<SolutionStream> MakeMachineStream(const Web& w, QuerySpec q,
                                                  Budget b,
                                                  EngineOptions opts = {});
std::unique_ptr<SolutionStream> MakeLtbStream(const Web& w, QuerySpec q,
                                              Budget b,
                                              EngineOptions opts = {});
// `order` lists pattern indexes of q.pattern; empty means 0..n-1. Throws
// InvalidValue if it is not a permutation.
std::unique_ptr<SolutionStream> MakeIteratorStream(
    const Web& w, QuerySpec q, std::vector<std::size_t> order, Budget b,
    EngineOptions opts = {});
std::unique_ptr<SolutionStream> MakeOracleStream(const Web& w, QuerySpec q,
                                                 Budget b);

// Pulls until the stream ends.
EngineRun Drain(SolutionStream& stream);

// Drain, throwing BudgetExhausted if a budget ended the run.
EngineRun RunMachine(const Web& w, const QuerySpec& q, const Budget& b = {},
                     const EngineOptions& opts = {});
EngineRun RunLtb(const Web& w, const QuerySpec& q, const Budget& b = {},
                 const EngineOptions& opts = {});
EngineRun RunIterator(const Web& w, const QuerySpec& q,
                      std::vector<std::size_t> order = {},
                      const Budget& b = {}, const EngineOptions& opts = {});

}  // namespace ldq
