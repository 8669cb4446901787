#include "ldq/engines.hpp"

#include <charconv>

#include "engine_support.hpp"

namespace ldq {
namespace internal {

StreamBase::StreamBase(const Web& w, QuerySpec q, Budget b, EngineOptions opts,
                       std::string name)
    : web_(w),
      query_(std::move(q)),
      budget_(b),
      opts_(std::move(opts)),
      name_(std::move(name)) {}

StreamItem StreamBase::Next() {
  while (true) {
    if (budget_.max_solutions && returned_ >= *budget_.max_solutions &&
        !(pending_.empty() && exhausted_)) {
      stopped_ = true;
      if (stop_reason_.empty()) stop_reason_ = "max-solutions";
      return BudgetStop{stop_reason_};
    }
    if (!pending_.empty()) {
      Valuation mu = std::move(pending_.front());
      pending_.pop_front();
      ++returned_;
      Trace("SOLUTION " + mu.ToString());
      return mu;
    }
    if (stopped_) return BudgetStop{stop_reason_};
    if (exhausted_) return Exhausted{};
    try {
      Step();
    } catch (const StopSignal& s) {
      stopped_ = true;
      stop_reason_ = s.reason;
    }
  }
}

EngineStats StreamBase::stats() const {
  EngineStats s = counters_;
  if (discovered_) {
    s.derefs = discovered_->deref_count();
    s.documents = discovered_->documents().size();
  }
  return s;
}

void StreamBase::Lookup(const Identifier& u) {
  if (discovered_->WasLookedUp(u)) return;
  if (budget_.max_derefs && discovered_->deref_count() >= *budget_.max_derefs) {
    throw StopSignal{"max-derefs"};
  }
  discovered_->Lookup(web_, u, &opts_.trace);
}

void StreamBase::Emit(const Valuation& mu) {
  if (emitted_.insert(mu).second) pending_.push_back(mu);
}

void RequireBudget(const Web& w, const Budget& b, const std::string& engine) {
  if (!w.IsFinite() && b.Unbounded()) {
    throw BudgetRequired(engine +
                         " engine over a possibly infinite web needs a budget");
  }
}

// Streams the two-phase oracle's result.
class OracleStream final : public StreamBase {
 public:
  OracleStream(const Web& w, QuerySpec q, Budget b)
      : StreamBase(w, std::move(q), b, {}, "oracle") {
    // Surfaces BudgetRequired at construction, like the other engines.
    if (!web_.IsFinite() && !budget_.max_derefs &&
        query_.criterion.kind() != ReachabilityCriterion::Kind::kNone) {
      throw BudgetRequired(
          "oracle over a possibly infinite web needs --max-derefs");
    }
  }

  EngineStats stats() const override { return stats_; }

 private:
  void Step() override {
    OracleResult r = OracleEvaluate(web_, query_, budget_.max_derefs);
    stats_.derefs = r.reach.derefs_used;
    stats_.documents = r.reach.documents.size();
    for (const auto& mu : r.solutions) Emit(mu);
    if (!r.complete) throw StopSignal{"max-derefs"};
    MarkExhausted();
  }

  EngineStats stats_;
};

}  // namespace internal

TaskPolicy TaskPolicy::FromName(std::string_view name) {
  if (name == "fifo") return Fifo();
  if (name == "lifo") return Lifo();
  constexpr std::string_view kRandom = "random:";
  if (name.starts_with(kRandom)) {
    std::string_view digits = name.substr(kRandom.size());
    std::uint64_t seed = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (!digits.empty() && ec == std::errc() &&
        ptr == digits.data() + digits.size()) {
      return Random(seed);
    }
  }
  throw InvalidValue("unknown task policy '" + std::string(name) + "'");
}

std::string TaskPolicy::name() const {
  switch (kind) {
    case Kind::kFifo:
      return "fifo";
    case Kind::kLifo:
      return "lifo";
    case Kind::kRandom:
      return "random:" + std::to_string(seed);
  }
  return "fifo";
}

std::unique_ptr<SolutionStream> MakeOracleStream(const Web& w, QuerySpec q,
                                                 Budget b) {
  return std::make_unique<internal::OracleStream>(w, std::move(q), b);
}

EngineRun Drain(SolutionStream& stream) {
  EngineRun run;
  run.engine = stream.name();
  while (true) {
    StreamItem item = stream.Next();
    if (auto* mu = std::get_if<Valuation>(&item)) {
      run.solutions.push_back(std::move(*mu));
      continue;
    }
    if (std::holds_alternative<Exhausted>(item)) {
      run.exhausted = true;
    } else {
      run.stop_reason = std::get<BudgetStop>(item).reason;
    }
    break;
  }
  run.stats = stream.stats();
  return run;
}

namespace {

EngineRun DrainOrThrow(SolutionStream& stream) {
  EngineRun run = Drain(stream);
  if (!run.exhausted) throw BudgetExhausted(std::move(run));
  return run;
}

}  // namespace

EngineRun RunMachine(const Web& w, const QuerySpec& q, const Budget& b,
                     const EngineOptions& opts) {
  auto stream = MakeMachineStream(w, q, b, opts);
  return DrainOrThrow(*stream);
}

EngineRun RunLtb(const Web& w, const QuerySpec& q, const Budget& b,
                 const EngineOptions& opts) {
  auto stream = MakeLtbStream(w, q, b, opts);
  return DrainOrThrow(*stream);
}

EngineRun RunIterator(const Web& w, const QuerySpec& q,
                      std::vector<std::size_t> order, const Budget& b,
                      const EngineOptions& opts) {
  auto stream = MakeIteratorStream(w, q, std::move(order), b, opts);
  return DrainOrThrow(*stream);
}

}  // namespace ldq
