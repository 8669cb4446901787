#pragma once

// Basic query patterns, matching, reachability criteria, and the two-phase
// reference evaluation of a conjunctive Linked Data query: first compute the
// reachable part of the web, then join the pattern against its data.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldq/terms.hpp"
#include "ldq/web.hpp"

namespace ldq {

// A finite, duplicate-free set of triple patterns. Insertion order is kept
// (it is the default pipeline order of the iterator engine); duplicates are
// dropped on construction. At most kMaxPatterns patterns.
class Bqp {
 public:
  static constexpr std::size_t kMaxPatterns = 64;

  Bqp() = default;
  explicit Bqp(std::vector<TriplePattern> patterns);
  Bqp(std::initializer_list<TriplePattern> patterns)
      : Bqp(std::vector<TriplePattern>(patterns)) {}

  std::span<const TriplePattern> patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const TriplePattern& operator[](std::size_t i) const { return patterns_[i]; }

  friend bool operator==(const Bqp&, const Bqp&) = default;

 private:
  std::vector<TriplePattern> patterns_;
};

// vars(.) and ids(.), sorted and duplicate-free.
std::vector<Variable> VarsOf(const TriplePattern& tp);
std::vector<Variable> VarsOf(const Bqp& b);
std::vector<Identifier> IdsOfPattern(const TriplePattern& tp);
std::vector<Identifier> IdsOfPattern(const Bqp& b);

// μ[tp]: replaces bound variables, leaves the rest. Throws
// IllegalLiteralPosition if a subject or predicate variable is bound to a
// literal.
TriplePattern Apply(const Valuation& mu, const TriplePattern& tp);
std::vector<TriplePattern> Apply(const Valuation& mu, const Bqp& b);
// As Apply, but nullopt where Apply would throw.
std::optional<TriplePattern> TryApply(const Valuation& mu,
                                      const TriplePattern& tp);

// The unique μ with dom(μ) = vars(tp) and μ[tp] = t, if any.
std::optional<Valuation> Unify(const Triple& t, const TriplePattern& tp);
bool Matches(const Triple& t, const TriplePattern& tp);

// c(t, u, B): decides whether identifier u of triple t is followed.
class ReachabilityCriterion {
 public:
  enum class Kind { kAll, kNone, kMatch, kCustom };
  using Predicate =
      std::function<bool(const Triple&, const Identifier&, const Bqp&)>;

  static ReachabilityCriterion All();
  static ReachabilityCriterion None();
  // True iff t matches some pattern of B; ignores u.
  static ReachabilityCriterion Match();
  // `predicate` must be total and pure.
  static ReachabilityCriterion Custom(std::string name, Predicate predicate);
  // "all", "none" or "match". Throws InvalidValue otherwise.
  static ReachabilityCriterion FromName(std::string_view name);

  bool operator()(const Triple& t, const Identifier& u, const Bqp& b) const;

  Kind kind() const { return kind_; }
  // "all", "none", "match" or "custom:<name>".
  std::string name() const;

 private:
  ReachabilityCriterion(Kind kind, std::string name, Predicate predicate)
      : kind_(kind), name_(std::move(name)), predicate_(std::move(predicate)) {}

  Kind kind_;
  std::string name_;
  Predicate predicate_;
};

// Q^B_{S,c}: pattern, seed identifiers and reachability criterion.
struct QuerySpec {
  QuerySpec(Bqp pattern, std::vector<Identifier> seeds,
            ReachabilityCriterion criterion);

  Bqp pattern;
  std::vector<Identifier> seeds;  // sorted, duplicate-free
  ReachabilityCriterion criterion;
};

struct ReachableReport {
  std::vector<DocumentId> documents;  // in the order they were reached
  std::vector<Triple> data;           // union of their triples, ordered
  bool complete = true;               // false only on budget exhaustion
  std::size_t derefs_used = 0;
};

// Breadth-first computation of the (S, c, B)-reachable part. Seeds are
// looked up in order; then documents are processed FIFO, their triples in
// triple order and each triple's identifiers in subject, predicate, object
// order. Every identifier is looked up at most once. If `max_derefs` runs
// out the partial part is returned with complete = false.
//
// Throws BudgetRequired for an unbounded run over an infinite web unless the
// criterion is None.
ReachableReport ReachablePart(const Web& w, const QuerySpec& q,
                              std::optional<std::size_t> max_derefs);

// All μ with dom(μ) = vars(B) and μ[B] ⊆ data, ordered. Backtracking join;
// an empty B yields the single empty valuation.
std::vector<Valuation> EvaluateBqp(const Bqp& b, std::span<const Triple> data);

struct OracleResult {
  std::vector<Valuation> solutions;  // ordered
  bool complete = true;
  ReachableReport reach;
};

OracleResult OracleEvaluate(const Web& w, const QuerySpec& q,
                            std::optional<std::size_t> max_derefs);

// Query text format: one triple pattern per line, three tokens, variables
// written ?name, literals quoted; '#' comment lines. Throws ParseError (also
// for literals in subject or predicate position).
Bqp ParseQuery(std::string_view text);
std::string WriteQuery(const Bqp& b);

}  // namespace ldq
