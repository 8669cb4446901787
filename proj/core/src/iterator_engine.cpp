#include <algorithm>
#include <numeric>

#include "engine_support.hpp"

namespace ldq {
namespace {

// Chain I_0 .. I_n. I_0 yields σ0 once; I_k pulls a partial solution from
// I_{k-1}, binds its pattern with it, builds every augmentation from the
// data discovered at that moment, expands the discovered part with all of
// them, and then hands them out one per call.
class IteratorStream final : public internal::StreamBase {
 public:
  IteratorStream(const Web& w, QuerySpec q, std::vector<std::size_t> order,
                 Budget b, EngineOptions opts)
      : StreamBase(w, std::move(q), b, std::move(opts), "iterator"),
        order_(std::move(order)) {
    if (query_.criterion.kind() != ReachabilityCriterion::Kind::kMatch) {
      throw UnsupportedCriterion(
          "iterator engine supports only the match criterion, got '" +
          query_.criterion.name() + "'");
    }
    const std::size_t n = query_.pattern.size();
    if (order_.empty()) {
      order_.resize(n);
      std::iota(order_.begin(), order_.end(), 0);
    }
    std::vector<std::size_t> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted.size() != n || sorted[i] != i) {
        throw InvalidValue("iterator order is not a permutation of the "
                           "pattern indexes");
      }
    }
    buffers_.resize(n + 1);
    discovered_ = &part_;
  }

 private:
  void Step() override {
    if (!initialized_) {
      for (const Identifier& u : query_.seeds) Lookup(u);
      initialized_ = true;
    }
    std::optional<PartialSolution> sigma = GetNext(order_.size());
    if (!sigma) {
      MarkExhausted();
      return;
    }
    Emit(sigma->valuation);
  }

  std::optional<PartialSolution> GetNext(std::size_t k) {
    if (k == 0) {
      if (root_consumed_) return std::nullopt;
      root_consumed_ = true;
      ++counters_.partials;
      return EmptyPartial();
    }
    auto& buffer = buffers_[k];
    const std::size_t pattern = order_[k - 1];
    while (buffer.empty()) {
      std::optional<PartialSolution> pred = GetNext(k - 1);
      if (!pred) return std::nullopt;
      // A literal bound into subject or predicate position matches nothing.
      auto bound = TryApply(pred->valuation, query_.pattern[pattern]);
      if (!bound) continue;

      // Snapshot: only triples discovered before this point are candidates.
      const std::size_t snapshot = part_.triples().size();
      std::vector<std::size_t> matched;
      for (std::size_t i = 0; i < snapshot; ++i) {
        const Triple& t = part_.triples()[i];
        if (!Matches(t, *bound)) continue;
        buffer.push_back(
            Augment(*pred, t, pattern, query_.pattern, part_));
        matched.push_back(i);
        ++counters_.tasks;
        ++counters_.partials;
      }
      for (std::size_t j = 0; j < buffer.size(); ++j) {
        for (const Identifier& u :
             ExpansionTargets(part_, buffer[j].valuation)) {
          Lookup(u);
        }
        if (opts_.expansion == Expansion::kMatchedTriple) {
          // Copy: Lookup may grow the triple vector.
          const Triple t = part_.triples()[matched[j]];
          for (const Identifier& u : IdsOf(t)) Lookup(u);
        }
      }
    }
    PartialSolution next = std::move(buffer.front());
    buffer.pop_front();
    return next;
  }

  std::vector<std::size_t> order_;
  DiscoveredPart part_;
  std::vector<std::deque<PartialSolution>> buffers_;  // M_k per iterator
  bool initialized_ = false;
  bool root_consumed_ = false;
};

}  // namespace

std::unique_ptr<SolutionStream> MakeIteratorStream(
    const Web& w, QuerySpec q, std::vector<std::size_t> order, Budget b,
    EngineOptions opts) {
  return std::make_unique<IteratorStream>(w, std::move(q), std::move(order), b,
                                          std::move(opts));
}

}  // namespace ldq
