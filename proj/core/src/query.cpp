#include "ldq/query.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "ldq/errors.hpp"
#include "ldq/lexer.hpp"

namespace ldq {

Bqp::Bqp(std::vector<TriplePattern> patterns) {
  for (auto& tp : patterns) {
    if (std::find(patterns_.begin(), patterns_.end(), tp) == patterns_.end()) {
      patterns_.push_back(std::move(tp));
    }
  }
  if (patterns_.size() > kMaxPatterns) {
    throw InvalidValue("basic query pattern has more than " +
                       std::to_string(kMaxPatterns) + " patterns");
  }
}

namespace {

template <typename T>
void SortUnique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void CollectVars(const TriplePattern& tp, std::vector<Variable>& out) {
  for (const PatternTerm* pt : {&tp.subject(), &tp.predicate(), &tp.object()}) {
    if (pt->is_variable()) out.push_back(pt->variable());
  }
}

void CollectIds(const TriplePattern& tp, std::vector<Identifier>& out) {
  for (const PatternTerm* pt : {&tp.subject(), &tp.predicate(), &tp.object()}) {
    if (pt->is_identifier()) out.push_back(pt->identifier());
  }
}

PatternTerm Substitute(const Valuation& mu, const PatternTerm& pt) {
  if (!pt.is_variable()) return pt;
  const Term* bound = mu.Find(pt.variable());
  return bound ? PatternTerm(*bound) : pt;
}

bool UnifyTerm(const PatternTerm& pt, const Term& value, Valuation& mu) {
  if (pt.is_variable()) return mu.Bind(pt.variable(), value);
  return pt.term() == value;
}

}  // namespace

std::vector<Variable> VarsOf(const TriplePattern& tp) {
  std::vector<Variable> out;
  CollectVars(tp, out);
  SortUnique(out);
  return out;
}

std::vector<Variable> VarsOf(const Bqp& b) {
  std::vector<Variable> out;
  for (const auto& tp : b.patterns()) CollectVars(tp, out);
  SortUnique(out);
  return out;
}

std::vector<Identifier> IdsOfPattern(const TriplePattern& tp) {
  std::vector<Identifier> out;
  CollectIds(tp, out);
  SortUnique(out);
  return out;
}

std::vector<Identifier> IdsOfPattern(const Bqp& b) {
  std::vector<Identifier> out;
  for (const auto& tp : b.patterns()) CollectIds(tp, out);
  SortUnique(out);
  return out;
}

TriplePattern Apply(const Valuation& mu, const TriplePattern& tp) {
  return TriplePattern(Substitute(mu, tp.subject()),
                       Substitute(mu, tp.predicate()),
                       Substitute(mu, tp.object()));
}

std::optional<TriplePattern> TryApply(const Valuation& mu,
                                      const TriplePattern& tp) {
  PatternTerm s = Substitute(mu, tp.subject());
  PatternTerm p = Substitute(mu, tp.predicate());
  if (s.is_literal() || p.is_literal()) return std::nullopt;
  return TriplePattern(std::move(s), std::move(p),
                       Substitute(mu, tp.object()));
}

std::vector<TriplePattern> Apply(const Valuation& mu, const Bqp& b) {
  std::vector<TriplePattern> out;
  out.reserve(b.size());
  for (const auto& tp : b.patterns()) out.push_back(Apply(mu, tp));
  return out;
}

std::optional<Valuation> Unify(const Triple& t, const TriplePattern& tp) {
  Valuation mu;
  if (!UnifyTerm(tp.subject(), t.subject, mu)) return std::nullopt;
  if (!UnifyTerm(tp.predicate(), t.predicate, mu)) return std::nullopt;
  if (!UnifyTerm(tp.object(), t.object, mu)) return std::nullopt;
  return mu;
}

bool Matches(const Triple& t, const TriplePattern& tp) {
  return Unify(t, tp).has_value();
}

// ---------------------------------------------------------------------------
// Criteria

ReachabilityCriterion ReachabilityCriterion::All() {
  return {Kind::kAll, "all",
          [](const Triple&, const Identifier&, const Bqp&) { return true; }};
}

ReachabilityCriterion ReachabilityCriterion::None() {
  return {Kind::kNone, "none",
          [](const Triple&, const Identifier&, const Bqp&) { return false; }};
}

ReachabilityCriterion ReachabilityCriterion::Match() {
  return {Kind::kMatch, "match",
          [](const Triple& t, const Identifier&, const Bqp& b) {
            return std::any_of(
                b.patterns().begin(), b.patterns().end(),
                [&](const TriplePattern& tp) { return Matches(t, tp); });
          }};
}

ReachabilityCriterion ReachabilityCriterion::Custom(std::string name,
                                                    Predicate predicate) {
  return {Kind::kCustom, "custom:" + name, std::move(predicate)};
}

ReachabilityCriterion ReachabilityCriterion::FromName(std::string_view name) {
  if (name == "all") return All();
  if (name == "none") return None();
  if (name == "match") return Match();
  throw InvalidValue("unknown reachability criterion '" + std::string(name) +
                     "'");
}

bool ReachabilityCriterion::operator()(const Triple& t, const Identifier& u,
                                       const Bqp& b) const {
  return predicate_(t, u, b);
}

std::string ReachabilityCriterion::name() const { return name_; }

QuerySpec::QuerySpec(Bqp pattern_in, std::vector<Identifier> seeds_in,
                     ReachabilityCriterion criterion_in)
    : pattern(std::move(pattern_in)),
      seeds(std::move(seeds_in)),
      criterion(std::move(criterion_in)) {
  SortUnique(seeds);
}

// ---------------------------------------------------------------------------
// Reachable part

ReachableReport ReachablePart(const Web& w, const QuerySpec& q,
                              std::optional<std::size_t> max_derefs) {
  using Kind = ReachabilityCriterion::Kind;
  if (!w.IsFinite() && !max_derefs && q.criterion.kind() != Kind::kNone) {
    throw BudgetRequired("reachable part of a possibly infinite web needs a "
                         "dereference budget under criterion '" +
                         q.criterion.name() + "'");
  }

  ReachableReport report;
  std::unordered_set<Identifier> looked_up;
  std::unordered_set<DocumentId> reached;
  std::deque<DocumentPtr> frontier;

  // Returns false when the budget forbids the lookup.
  auto lookup = [&](const Identifier& u) {
    if (max_derefs && report.derefs_used >= *max_derefs) return false;
    looked_up.insert(u);
    ++report.derefs_used;
    if (DocumentPtr d = w.Deref(u)) {
      if (reached.insert(d->id()).second) {
        report.documents.push_back(d->id());
        frontier.push_back(std::move(d));
      }
    }
    return true;
  };

  std::vector<Triple> data;
  auto finish = [&](bool complete) {
    report.complete = complete;
    SortUnique(data);
    report.data = std::move(data);
    return std::move(report);
  };

  for (const Identifier& u : q.seeds) {
    if (looked_up.contains(u)) continue;
    if (!lookup(u)) {
      for (const auto& d : frontier) {
        data.insert(data.end(), d->triples().begin(), d->triples().end());
      }
      return finish(false);
    }
  }

  while (!frontier.empty()) {
    DocumentPtr d = frontier.front();
    frontier.pop_front();
    data.insert(data.end(), d->triples().begin(), d->triples().end());
    for (const Triple& t : d->triples()) {
      for (const Identifier& u : IdsOf(t)) {
        if (looked_up.contains(u)) continue;
        if (!q.criterion(t, u, q.pattern)) continue;
        if (!lookup(u)) {
          for (const auto& pending : frontier) {
            data.insert(data.end(), pending->triples().begin(),
                        pending->triples().end());
          }
          return finish(false);
        }
      }
    }
  }
  return finish(true);
}

// ---------------------------------------------------------------------------
// Join

namespace {

class TripleIndex {
 public:
  explicit TripleIndex(std::span<const Triple> data) : data_(data) {
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      by_subject_[Term(data[i].subject)].push_back(i);
      by_predicate_[Term(data[i].predicate)].push_back(i);
      by_object_[data[i].object].push_back(i);
    }
    all_.resize(data.size());
    for (std::uint32_t i = 0; i < data.size(); ++i) all_[i] = i;
  }

  // Smallest candidate list for a partially bound pattern.
  std::span<const std::uint32_t> Candidates(const TriplePattern& tp) const {
    std::span<const std::uint32_t> best = all_;
    auto narrow = [&](const PatternTerm& pt, const auto& index) {
      if (pt.is_variable()) return;
      auto it = index.find(pt.term());
      if (it == index.end()) {
        best = {};
        return;
      }
      if (it->second.size() < best.size()) best = it->second;
    };
    narrow(tp.subject(), by_subject_);
    if (best.empty()) return best;
    narrow(tp.predicate(), by_predicate_);
    if (best.empty()) return best;
    narrow(tp.object(), by_object_);
    return best;
  }

  const Triple& operator[](std::uint32_t i) const { return data_[i]; }

 private:
  using Index = std::unordered_map<Term, std::vector<std::uint32_t>>;
  std::span<const Triple> data_;
  Index by_subject_;
  Index by_predicate_;
  Index by_object_;
  std::vector<std::uint32_t> all_;
};

void Join(const std::vector<TriplePattern>& order, std::size_t depth,
          const TripleIndex& index, Valuation& mu,
          std::vector<Valuation>& out) {
  if (depth == order.size()) {
    out.push_back(mu);
    return;
  }
  auto bound = TryApply(mu, order[depth]);
  if (!bound) return;
  for (std::uint32_t i : index.Candidates(*bound)) {
    auto step = Unify(index[i], *bound);
    if (!step) continue;
    auto merged = mu.Merge(*step);
    Valuation saved = std::move(mu);
    mu = std::move(*merged);
    Join(order, depth + 1, index, mu, out);
    mu = std::move(saved);
  }
}

}  // namespace

std::vector<Valuation> EvaluateBqp(const Bqp& b,
                                   std::span<const Triple> data) {
  std::vector<TriplePattern> order(b.patterns().begin(), b.patterns().end());
  std::sort(order.begin(), order.end(),
            [](const TriplePattern& x, const TriplePattern& y) {
              if (x.constant_count() != y.constant_count()) {
                return x.constant_count() > y.constant_count();
              }
              return x.ToString() < y.ToString();
            });
  TripleIndex index(data);
  std::vector<Valuation> out;
  Valuation mu;
  Join(order, 0, index, mu, out);
  SortUnique(out);
  return out;
}

OracleResult OracleEvaluate(const Web& w, const QuerySpec& q,
                            std::optional<std::size_t> max_derefs) {
  OracleResult result;
  result.reach = ReachablePart(w, q, max_derefs);
  result.complete = result.reach.complete;
  result.solutions = EvaluateBqp(q.pattern, result.reach.data);
  return result;
}

// ---------------------------------------------------------------------------
// Query text

Bqp ParseQuery(std::string_view text) {
  std::vector<TriplePattern> patterns;
  auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (IsCommentOrBlank(lines[i])) continue;
    auto toks = TokenizeLine(lines[i], i + 1);
    if (toks.size() != 3) {
      throw ParseError("triple pattern needs exactly three terms", i + 1,
                       toks.front().column);
    }
    try {
      patterns.emplace_back(PatternTermFromToken(toks[0]),
                            PatternTermFromToken(toks[1]),
                            PatternTermFromToken(toks[2]));
    } catch (const IllegalLiteralPosition& e) {
      throw ParseError(e.what(), i + 1, toks.front().column);
    }
  }
  return Bqp(std::move(patterns));
}

std::string WriteQuery(const Bqp& b) {
  std::string out;
  for (const auto& tp : b.patterns()) out += tp.ToString() + "\n";
  return out;
}

}  // namespace ldq
