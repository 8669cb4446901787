#include "engine_support.hpp"

namespace ldq {
namespace {

// Round j: evaluate the whole pattern over T_j (everything looked up so
// far) and emit what is new; then follow the first link the criterion
// allows that has not been looked up, or halt if there is none.
class MachineStream final : public internal::StreamBase {
 public:
  MachineStream(const Web& w, QuerySpec q, Budget b, EngineOptions opts)
      : StreamBase(w, std::move(q), b, std::move(opts), "machine") {
    if (query_.criterion.kind() != ReachabilityCriterion::Kind::kNone) {
      internal::RequireBudget(web_, budget_, "machine");
    }
    discovered_ = &part_;
  }

 private:
  void Step() override {
    if (!initialized_) {
      for (const Identifier& u : query_.seeds) Lookup(u);
      initialized_ = true;
    }
    if (budget_.max_rounds && counters_.rounds >= *budget_.max_rounds) {
      throw internal::StopSignal{"max-rounds"};
    }
    ++counters_.rounds;
    for (const Valuation& mu : EvaluateBqp(query_.pattern, part_.triples())) {
      Emit(mu);
    }
    if (auto next = FindLink()) {
      Lookup(*next);
    } else {
      MarkExhausted();
    }
  }

  // Scans the looked-up documents in lookup order, each document's triples
  // in triple order. Everything before the cursor is settled: its
  // identifiers were looked up or rejected by the (pure) criterion.
  std::optional<Identifier> FindLink() {
    const auto& docs = part_.documents();
    for (; doc_ < docs.size(); ++doc_, triple_ = 0, id_ = 0) {
      auto triples = docs[doc_]->triples();
      for (; triple_ < triples.size(); ++triple_, id_ = 0) {
        const Triple& t = triples[triple_];
        auto ids = IdsOf(t);
        for (; id_ < ids.size(); ++id_) {
          const Identifier& u = ids[id_];
          if (part_.WasLookedUp(u)) continue;
          if (!query_.criterion(t, u, query_.pattern)) continue;
          return u;
        }
      }
    }
    return std::nullopt;
  }

  DiscoveredPart part_;
  bool initialized_ = false;
  std::size_t doc_ = 0;
  std::size_t triple_ = 0;
  std::size_t id_ = 0;
};

}  // namespace

std::unique_ptr<SolutionStream> MakeMachineStream(const Web& w, QuerySpec q,
                                                  Budget b,
                                                  EngineOptions opts) {
  return std::make_unique<MachineStream>(w, std::move(q), b, std::move(opts));
}

}  // namespace ldq
