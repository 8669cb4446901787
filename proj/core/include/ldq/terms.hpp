#pragma once

// Identifiers, literals, data triples, triple patterns and valuations: the
// value algebra everything else in ldq is built from.
//
// Total orders. Identifiers and variables compare byte-wise on their text.
// Literals compare byte-wise on their quoted external form (see Quote), so
// the orders agree with what the canonical encodings print. In a term
// position identifiers sort before literals. Triples compare
// lexicographically on (subject, predicate, object).

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ldq {

// True if `text` may be used as an identifier, a document id or a variable
// name: non-empty, no whitespace, no '"', no control characters.
bool IsPlainToken(std::string_view text);

// Renders a literal value in its quoted external form: "..." with '"' and
// '\' escaped, plus \n, \t, \r for the corresponding control characters.
std::string Quote(std::string_view value);

// Three-way comparison of two literal values by their quoted forms, without
// materializing them.
std::strong_ordering CompareQuoted(std::string_view a, std::string_view b);

class Identifier {
 public:
  // Throws InvalidValue unless IsPlainToken(value) and value does not start
  // with '?' (that prefix is reserved for variables).
  explicit Identifier(std::string value);

  const std::string& value() const { return value_; }

  friend bool operator==(const Identifier&, const Identifier&) = default;
  friend std::strong_ordering operator<=>(const Identifier& a,
                                          const Identifier& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

class Literal {
 public:
  explicit Literal(std::string value) : value_(std::move(value)) {}

  const std::string& value() const { return value_; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    return CompareQuoted(a.value_, b.value_);
  }

 private:
  std::string value_;
};

// An element of I ∪ L.
class Term {
 public:
  Term(Identifier id) : value_(std::move(id)) {}  // NOLINT: implicit by intent
  Term(Literal lit) : value_(std::move(lit)) {}   // NOLINT

  bool is_identifier() const { return value_.index() == 0; }
  bool is_literal() const { return value_.index() == 1; }
  const Identifier& identifier() const { return std::get<0>(value_); }
  const Literal& literal() const { return std::get<1>(value_); }

  // Identifier text, or the quoted literal.
  std::string ToToken() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  std::variant<Identifier, Literal> value_;
};

struct Triple {
  Identifier subject;
  Identifier predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple& a, const Triple& b);
};

// ids(t): the identifiers of a triple, each once, in subject, predicate,
// object order.
std::vector<Identifier> IdsOf(const Triple& t);

// `s p o` with the literal object quoted.
std::string ToString(const Triple& t);

class Variable {
 public:
  // `name` excludes the '?' prefix. Throws InvalidValue if not a plain token.
  explicit Variable(std::string name);

  const std::string& name() const { return name_; }
  std::string ToToken() const { return "?" + name_; }

  friend bool operator==(const Variable&, const Variable&) = default;
  friend std::strong_ordering operator<=>(const Variable& a,
                                          const Variable& b) {
    return a.name_.compare(b.name_) <=> 0;
  }

 private:
  std::string name_;
};

// A triple-pattern component: a variable, an identifier or a literal.
class PatternTerm {
 public:
  PatternTerm(Variable v) : value_(std::move(v)) {}    // NOLINT
  PatternTerm(Identifier id) : value_(std::move(id)) {}  // NOLINT
  PatternTerm(Literal lit) : value_(std::move(lit)) {}   // NOLINT
  PatternTerm(Term t);                                   // NOLINT

  bool is_variable() const { return value_.index() == 0; }
  bool is_identifier() const { return value_.index() == 1; }
  bool is_literal() const { return value_.index() == 2; }
  const Variable& variable() const { return std::get<0>(value_); }
  const Identifier& identifier() const { return std::get<1>(value_); }
  const Literal& literal() const { return std::get<2>(value_); }

  // The constant as a Term. Precondition: !is_variable().
  Term term() const;

  std::string ToToken() const;

  friend bool operator==(const PatternTerm&, const PatternTerm&) = default;
  friend std::strong_ordering operator<=>(const PatternTerm& a,
                                          const PatternTerm& b);

 private:
  std::variant<Variable, Identifier, Literal> value_;
};

class TriplePattern {
 public:
  // Throws IllegalLiteralPosition if subject or predicate is a literal.
  TriplePattern(PatternTerm subject, PatternTerm predicate, PatternTerm object);

  const PatternTerm& subject() const { return subject_; }
  const PatternTerm& predicate() const { return predicate_; }
  const PatternTerm& object() const { return object_; }

  // Number of non-variable positions.
  int constant_count() const;
  bool is_ground() const { return constant_count() == 3; }

  // Precondition: is_ground().
  Triple ToTriple() const;

  std::string ToString() const;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
  friend std::strong_ordering operator<=>(const TriplePattern& a,
                                          const TriplePattern& b);

 private:
  PatternTerm subject_;
  PatternTerm predicate_;
  PatternTerm object_;
};

// A finite mapping from variables to terms, kept sorted by variable.
class Valuation {
 public:
  using Binding = std::pair<Variable, Term>;

  Valuation() = default;
  Valuation(std::initializer_list<Binding> bindings);

  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  const Term* Find(const Variable& v) const;
  bool Contains(const Variable& v) const { return Find(v) != nullptr; }

  // Adds v -> t. Returns false (and leaves the valuation unchanged) if v is
  // already bound to a different term.
  bool Bind(const Variable& v, Term t);

  std::vector<Variable> Domain() const;

  // True if both agree on every shared variable.
  bool CompatibleWith(const Valuation& other) const;

  // Union of two compatible valuations; nullopt on conflict.
  std::optional<Valuation> Merge(const Valuation& other) const;

  // `?a=x ?b="lit"`, sorted by variable.
  std::string ToString() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a,
                                          const Valuation& b);

 private:
  std::vector<Binding> bindings_;
};

std::size_t HashCombine(std::size_t seed, std::size_t value);

}  // namespace ldq

template <>
struct std::hash<ldq::Identifier> {
  std::size_t operator()(const ldq::Identifier& id) const noexcept {
    return std::hash<std::string>{}(id.value());
  }
};

template <>
struct std::hash<ldq::Term> {
  std::size_t operator()(const ldq::Term& t) const noexcept;
};

template <>
struct std::hash<ldq::Triple> {
  std::size_t operator()(const ldq::Triple& t) const noexcept;
};

template <>
struct std::hash<ldq::Variable> {
  std::size_t operator()(const ldq::Variable& v) const noexcept {
    return std::hash<std::string>{}(v.name());
  }
};

template <>
struct std::hash<ldq::TriplePattern> {
  std::size_t operator()(const ldq::TriplePattern& tp) const noexcept;
};

template <>
struct std::hash<ldq::Valuation> {
  std::size_t operator()(const ldq::Valuation& v) const noexcept;
};
