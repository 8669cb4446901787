#include <random>

#include "engine_support.hpp"

namespace ldq {
namespace {

class LtbStream final : public internal::StreamBase {
 public:
  LtbStream(const Web& w, QuerySpec q, Budget b, EngineOptions opts)
      : StreamBase(w, std::move(q), b, std::move(opts), "ltb"),
        state_(query_.pattern, DiscoveredPart{}),
        rng_(opts_.policy.seed) {
    if (query_.criterion.kind() != ReachabilityCriterion::Kind::kMatch) {
      throw UnsupportedCriterion(
          "ltb engine supports only the match criterion, got '" +
          query_.criterion.name() + "'");
    }
    internal::RequireBudget(web_, budget_, "ltb");
    discovered_ = &state_.discovered();
  }

 private:
  void Step() override {
    if (!initialized_) {
      Initialize();
      return;
    }
    auto& queue = state_.open_queue();
    while (!queue.empty()) {
      AeTask task = Pop();
      // Openness is checked here: 𝔓 may have grown since the task was queued.
      std::optional<PartialSolution> aug = state_.AugmentationOf(task);
      if (!aug || state_.HasPartial(*aug)) continue;
      if (budget_.max_tasks && counters_.tasks >= *budget_.max_tasks) {
        throw internal::StopSignal{"max-tasks"};
      }
      Perform(task, std::move(*aug));
      return;
    }
    MarkExhausted();
  }

  void Initialize() {
    for (const Identifier& u : query_.seeds) Lookup(u);
    std::size_t sigma0 = state_.AddPartial(EmptyPartial());
    counters_.partials = 1;
    state_.EnqueueDelta(sigma0, 0);
    initialized_ = true;
    // With an empty pattern the empty valuation is the only solution and no
    // task ever produces it.
    if (query_.pattern.empty()) Emit(Valuation{});
  }

  void Perform(const AeTask& task, PartialSolution aug) {
    ++counters_.tasks;
    Trace("TASK " + std::to_string(counters_.tasks) + " " +
          state_.Describe(task));
    const Triple matched = state_.discovered().triples()[task.triple];
    bool complete = aug.CoversAll(query_.pattern);
    Valuation mu = aug.valuation;
    std::size_t index = state_.AddPartial(std::move(aug));
    ++counters_.partials;

    std::size_t first_new = state_.discovered().triples().size();
    for (const Identifier& u : ExpansionTargets(state_.discovered(), mu)) {
      Lookup(u);
    }
    if (opts_.expansion == Expansion::kMatchedTriple) {
      for (const Identifier& u : IdsOf(matched)) Lookup(u);
    }
    state_.EnqueueDelta(index, first_new);
    if (complete) Emit(mu);
  }

  AeTask Pop() {
    auto& queue = state_.open_queue();
    AeTask task;
    switch (opts_.policy.kind) {
      case TaskPolicy::Kind::kFifo:
        task = queue.front();
        queue.pop_front();
        break;
      case TaskPolicy::Kind::kLifo:
        task = queue.back();
        queue.pop_back();
        break;
      case TaskPolicy::Kind::kRandom: {
        std::uniform_int_distribution<std::size_t> pick(0, queue.size() - 1);
        std::size_t i = pick(rng_);
        task = queue[i];
        queue[i] = queue.back();
        queue.pop_back();
        break;
      }
    }
    return task;
  }

  ExecutionState state_;
  std::mt19937_64 rng_;
  bool initialized_ = false;
};

}  // namespace

std::unique_ptr<SolutionStream> MakeLtbStream(const Web& w, QuerySpec q,
                                              Budget b, EngineOptions opts) {
  return std::make_unique<LtbStream>(w, std::move(q), b, std::move(opts));
}

}  // namespace ldq
