#include "ldq/exec_state.hpp"

#include <bit>

#include "ldq/errors.hpp"

namespace ldq {

std::size_t PartialSolution::covered_count() const {
  return static_cast<std::size_t>(std::popcount(covered));
}

bool PartialSolution::CoversAll(const Bqp& b) const {
  return covered_count() == b.size();
}

std::string PartialSolution::ToString() const {
  std::string out = "[";
  bool first = true;
  for (std::size_t i = 0; i < 64; ++i) {
    if (!Covers(i)) continue;
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  out += "]";
  if (!valuation.empty()) out += " " + valuation.ToString();
  return out;
}

PartialSolution EmptyPartial() { return PartialSolution{}; }

// ---------------------------------------------------------------------------
// DiscoveredPart

std::size_t DiscoveredPart::Lookup(const Web& w, const Identifier& u,
                                   const TraceSink* trace) {
  if (deref_log_.contains(u)) return 0;
  DocumentPtr doc = w.Deref(u);
  if (trace && *trace) {
    (*trace)("DEREF " + u.value() + " " + (doc ? doc->id().value() : "none"));
  }
  if (!doc) {
    deref_log_.emplace(u, std::nullopt);
    return 0;
  }
  deref_log_.emplace(u, doc->id());
  if (!document_set_.insert(doc->id()).second) return 0;
  std::size_t added = 0;
  for (const Triple& t : doc->triples()) {
    if (triple_set_.insert(t).second) {
      triples_.push_back(t);
      ++added;
    }
  }
  documents_.push_back(std::move(doc));
  return added;
}

std::vector<DocumentId> DiscoveredPart::DocumentIds() const {
  std::vector<DocumentId> out;
  out.reserve(documents_.size());
  for (const auto& d : documents_) out.push_back(d->id());
  return out;
}

DiscoveredPart InitialDiscovered(const Web& w,
                                 std::span<const Identifier> seeds,
                                 const TraceSink* trace) {
  std::vector<Identifier> ordered(seeds.begin(), seeds.end());
  std::sort(ordered.begin(), ordered.end());
  DiscoveredPart d;
  for (const Identifier& u : ordered) d.Lookup(w, u, trace);
  return d;
}

std::vector<Identifier> ExpansionTargets(const DiscoveredPart& d,
                                         const Valuation& mu) {
  std::vector<Identifier> out;
  for (const auto& [var, term] : mu) {
    if (!term.is_identifier()) continue;
    const Identifier& u = term.identifier();
    if (d.WasLookedUp(u)) continue;
    if (std::find(out.begin(), out.end(), u) != out.end()) continue;
    out.push_back(u);
  }
  return out;
}

void MuExpandInPlace(DiscoveredPart& d, const Valuation& mu, const Web& w,
                     const TraceSink* trace) {
  for (const Identifier& u : ExpansionTargets(d, mu)) d.Lookup(w, u, trace);
}

DiscoveredPart MuExpand(DiscoveredPart d, const Valuation& mu, const Web& w) {
  MuExpandInPlace(d, mu, w);
  return d;
}

// ---------------------------------------------------------------------------
// Augmentation

std::optional<PartialSolution> TryAugment(const PartialSolution& sigma,
                                          const Triple& t,
                                          std::size_t pattern, const Bqp& b,
                                          const DiscoveredPart& d) {
  if (pattern >= b.size() || sigma.Covers(pattern)) return std::nullopt;
  if (!d.ContainsTriple(t)) return std::nullopt;
  auto step = Unify(t, b[pattern]);
  if (!step) return std::nullopt;
  auto merged = sigma.valuation.Merge(*step);
  if (!merged) return std::nullopt;
  return PartialSolution{sigma.covered | (std::uint64_t{1} << pattern),
                         std::move(*merged)};
}

PartialSolution Augment(const PartialSolution& sigma, const Triple& t,
                        std::size_t pattern, const Bqp& b,
                        const DiscoveredPart& d) {
  auto out = TryAugment(sigma, t, pattern, b, d);
  if (!out) {
    throw NotApplicable("no (" + ToString(t) + ", pattern " +
                        std::to_string(pattern) + ")-augmentation of " +
                        sigma.ToString());
  }
  return std::move(*out);
}

// ---------------------------------------------------------------------------
// ExecutionState

ExecutionState::ExecutionState(Bqp pattern, DiscoveredPart discovered)
    : pattern_(std::move(pattern)),
      discovered_(std::move(discovered)),
      matches_(pattern_.size()) {
  IndexNewTriples();
}

std::size_t ExecutionState::AddPartial(PartialSolution p, bool* inserted) {
  auto it = partial_set_.find(p);
  if (it != partial_set_.end()) {
    if (inserted) *inserted = false;
    return it->second;
  }
  std::size_t index = partials_.size();
  partial_set_.emplace(p, index);
  partials_.push_back(std::move(p));
  if (inserted) *inserted = true;
  return index;
}

void ExecutionState::IndexNewTriples() {
  auto triples = discovered_.triples();
  for (; indexed_triples_ < triples.size(); ++indexed_triples_) {
    for (std::size_t p = 0; p < pattern_.size(); ++p) {
      if (Matches(triples[indexed_triples_], pattern_[p])) {
        matches_[p].push_back(indexed_triples_);
      }
    }
  }
}

std::size_t ExecutionState::EnqueueDelta(std::optional<std::size_t> new_partial,
                                         std::size_t first_new_triple) {
  std::size_t before_index = indexed_triples_;
  IndexNewTriples();
  first_new_triple = std::min(first_new_triple, before_index);
  auto triples = discovered_.triples();
  std::size_t appended = 0;

  auto consider = [&](std::size_t partial, std::size_t triple,
                      std::size_t pattern) {
    const PartialSolution& sigma = partials_[partial];
    if (sigma.Covers(pattern)) return;
    auto step = Unify(triples[triple], pattern_[pattern]);
    if (!step || !sigma.valuation.CompatibleWith(*step)) return;
    open_queue_.push_back(AeTask{partial, triple, pattern});
    ++appended;
  };

  // (b) existing partials against the new triples.
  for (std::size_t p = 0; p < pattern_.size(); ++p) {
    const auto& matching = matches_[p];
    auto first = std::lower_bound(matching.begin(), matching.end(),
                                  first_new_triple);
    for (auto it = first; it != matching.end(); ++it) {
      for (std::size_t j = 0; j < partials_.size(); ++j) {
        if (new_partial && j == *new_partial) continue;
        consider(j, *it, p);
      }
    }
  }
  // (a) the new partial against everything discovered.
  if (new_partial) {
    for (std::size_t p = 0; p < pattern_.size(); ++p) {
      for (std::size_t triple : matches_[p]) consider(*new_partial, triple, p);
    }
  }
  return appended;
}

std::optional<PartialSolution> ExecutionState::AugmentationOf(
    const AeTask& task) const {
  if (task.partial >= partials_.size()) return std::nullopt;
  if (task.triple >= discovered_.triples().size()) return std::nullopt;
  return TryAugment(partials_[task.partial],
                    discovered_.triples()[task.triple], task.pattern,
                    pattern_, discovered_);
}

bool ExecutionState::IsAeTask(const AeTask& task) const {
  if (task.partial >= partials_.size()) return false;
  if (task.triple >= discovered_.triples().size()) return false;
  if (task.pattern >= pattern_.size()) return false;
  if (partials_[task.partial].Covers(task.pattern)) return false;
  return Matches(discovered_.triples()[task.triple], pattern_[task.pattern]);
}

bool ExecutionState::IsOpen(const AeTask& task) const {
  if (!IsAeTask(task)) return false;
  auto aug = AugmentationOf(task);
  return aug && !HasPartial(*aug);
}

std::string ExecutionState::Describe(const AeTask& task) const {
  return "σ=" + partials_[task.partial].ToString() + " t=" +
         ToString(discovered_.triples()[task.triple]) +
         " tp=" + pattern_[task.pattern].ToString();
}

}  // namespace ldq
