#pragma once

#include <deque>
#include <string>
#include <unordered_set>

#include "ldq/engines.hpp"

namespace ldq::internal {

// Unwinds an engine step when a budget runs out.
struct StopSignal {
  std::string reason;
};

// Shared Next() logic: pending solutions first, then sticky stop/exhausted
// states, then another engine step.
class StreamBase : public SolutionStream {
 public:
  StreamItem Next() final;
  EngineStats stats() const override;
  std::string name() const override { return name_; }

 protected:
  StreamBase(const Web& w, QuerySpec q, Budget b, EngineOptions opts,
             std::string name);

  // Makes progress: may emit solutions, look up identifiers, or call
  // MarkExhausted. Throws StopSignal when a budget runs out.
  virtual void Step() = 0;

  // Looks u up unless already known. Throws StopSignal if the dereference
  // budget is used up.
  void Lookup(const Identifier& u);
  void Emit(const Valuation& mu);
  void MarkExhausted() { exhausted_ = true; }
  void Trace(const std::string& line) const {
    if (opts_.trace) opts_.trace(line);
  }

  const Web& web_;
  QuerySpec query_;
  Budget budget_;
  EngineOptions opts_;
  DiscoveredPart* discovered_ = nullptr;  // set by the engine
  EngineStats counters_;                  // tasks, rounds, partials

 private:
  std::string name_;
  std::deque<Valuation> pending_;
  std::unordered_set<Valuation> emitted_;
  std::size_t returned_ = 0;
  bool exhausted_ = false;
  bool stopped_ = false;
  std::string stop_reason_;
};

// Throws BudgetRequired if an unbounded run over `w` might not terminate.
void RequireBudget(const Web& w, const Budget& b, const std::string& engine);

}  // namespace ldq::internal
