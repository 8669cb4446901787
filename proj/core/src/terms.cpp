#include "ldq/terms.hpp"

#include <algorithm>

#include "ldq/errors.hpp"

namespace ldq {
namespace {

bool IsControl(unsigned char c) { return c < 0x20 || c == 0x7f; }

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

// Escape sequence for one literal character; empty when it stands for
// itself.
std::string_view EscapeOf(char c) {
  switch (c) {
    case '"':
      return "\\\"";
    case '\\':
      return "\\\\";
    case '\n':
      return "\\n";
    case '\t':
      return "\\t";
    case '\r':
      return "\\r";
    default:
      return {};
  }
}

// Walks the quoted form of a literal one byte at a time.
class QuotedCursor {
 public:
  explicit QuotedCursor(std::string_view value) : value_(value) {}

  // Next byte of '"' + escaped(value) + '"', or -1 past the end.
  int Next() {
    if (state_ == kOpen) {
      state_ = kBody;
      return '"';
    }
    if (state_ == kBody) {
      if (!pending_.empty()) {
        char c = pending_.front();
        pending_.remove_prefix(1);
        return static_cast<unsigned char>(c);
      }
      if (pos_ == value_.size()) {
        state_ = kDone;
        return '"';
      }
      char c = value_[pos_++];
      std::string_view esc = EscapeOf(c);
      if (esc.empty()) return static_cast<unsigned char>(c);
      pending_ = esc.substr(1);
      return static_cast<unsigned char>(esc.front());
    }
    return -1;
  }

 private:
  enum State { kOpen, kBody, kDone };
  std::string_view value_;
  std::string_view pending_;
  std::size_t pos_ = 0;
  State state_ = kOpen;
};

}  // namespace

bool IsPlainToken(std::string_view text) {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return IsSpace(c) || IsControl(c) || c == '"';
  });
}

std::string Quote(std::string_view value) {
  std::string out;
  out.reserve(value.size() + 2);
  out.push_back('"');
  for (char c : value) {
    std::string_view esc = EscapeOf(c);
    if (esc.empty()) {
      out.push_back(c);
    } else {
      out.append(esc);
    }
  }
  out.push_back('"');
  return out;
}

std::strong_ordering CompareQuoted(std::string_view a, std::string_view b) {
  QuotedCursor ca(a);
  QuotedCursor cb(b);
  while (true) {
    int x = ca.Next();
    int y = cb.Next();
    if (x != y) return x <=> y;
    if (x < 0) return std::strong_ordering::equal;
  }
}

Identifier::Identifier(std::string value) : value_(std::move(value)) {
  if (!IsPlainToken(value_) || value_.front() == '?') {
    throw InvalidValue("invalid identifier '" + value_ + "'");
  }
}

std::string Term::ToToken() const {
  return is_identifier() ? identifier().value() : Quote(literal().value());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.value_.index() != b.value_.index()) {
    return a.value_.index() <=> b.value_.index();
  }
  if (a.is_identifier()) return a.identifier() <=> b.identifier();
  return a.literal() <=> b.literal();
}

std::strong_ordering operator<=>(const Triple& a, const Triple& b) {
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return a.object <=> b.object;
}

std::vector<Identifier> IdsOf(const Triple& t) {
  std::vector<Identifier> ids{t.subject};
  if (t.predicate != t.subject) ids.push_back(t.predicate);
  if (t.object.is_identifier()) {
    const Identifier& o = t.object.identifier();
    if (o != t.subject && o != t.predicate) ids.push_back(o);
  }
  return ids;
}

std::string ToString(const Triple& t) {
  return t.subject.value() + " " + t.predicate.value() + " " +
         t.object.ToToken();
}

Variable::Variable(std::string name) : name_(std::move(name)) {
  if (!IsPlainToken(name_)) {
    throw InvalidValue("invalid variable name '" + name_ + "'");
  }
}

PatternTerm::PatternTerm(Term t)
    : value_(t.is_identifier()
                 ? std::variant<Variable, Identifier, Literal>(t.identifier())
                 : std::variant<Variable, Identifier, Literal>(t.literal())) {}

Term PatternTerm::term() const {
  if (is_identifier()) return identifier();
  return literal();
}

std::string PatternTerm::ToToken() const {
  if (is_variable()) return variable().ToToken();
  return term().ToToken();
}

std::strong_ordering operator<=>(const PatternTerm& a, const PatternTerm& b) {
  if (a.value_.index() != b.value_.index()) {
    return a.value_.index() <=> b.value_.index();
  }
  if (a.is_variable()) return a.variable() <=> b.variable();
  if (a.is_identifier()) return a.identifier() <=> b.identifier();
  return a.literal() <=> b.literal();
}

TriplePattern::TriplePattern(PatternTerm subject, PatternTerm predicate,
                             PatternTerm object)
    : subject_(std::move(subject)),
      predicate_(std::move(predicate)),
      object_(std::move(object)) {
  if (subject_.is_literal() || predicate_.is_literal()) {
    throw IllegalLiteralPosition("literal in subject or predicate of pattern " +
                                 ToString());
  }
}

int TriplePattern::constant_count() const {
  return static_cast<int>(!subject_.is_variable()) +
         static_cast<int>(!predicate_.is_variable()) +
         static_cast<int>(!object_.is_variable());
}

Triple TriplePattern::ToTriple() const {
  return Triple{subject_.identifier(), predicate_.identifier(),
                object_.term()};
}

std::string TriplePattern::ToString() const {
  return subject_.ToToken() + " " + predicate_.ToToken() + " " +
         object_.ToToken();
}

std::strong_ordering operator<=>(const TriplePattern& a,
                                 const TriplePattern& b) {
  if (auto c = a.subject_ <=> b.subject_; c != 0) return c;
  if (auto c = a.predicate_ <=> b.predicate_; c != 0) return c;
  return a.object_ <=> b.object_;
}

Valuation::Valuation(std::initializer_list<Binding> bindings) {
  for (const auto& [v, t] : bindings) {
    if (!Bind(v, t)) {
      throw InvalidValue("conflicting bindings for " + v.ToToken());
    }
  }
}

const Term* Valuation::Find(const Variable& v) const {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), v,
      [](const Binding& b, const Variable& key) { return b.first < key; });
  if (it == bindings_.end() || it->first != v) return nullptr;
  return &it->second;
}

bool Valuation::Bind(const Variable& v, Term t) {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), v,
      [](const Binding& b, const Variable& key) { return b.first < key; });
  if (it != bindings_.end() && it->first == v) return it->second == t;
  bindings_.emplace(it, v, std::move(t));
  return true;
}

std::vector<Variable> Valuation::Domain() const {
  std::vector<Variable> out;
  out.reserve(bindings_.size());
  for (const auto& b : bindings_) out.push_back(b.first);
  return out;
}

bool Valuation::CompatibleWith(const Valuation& other) const {
  auto a = bindings_.begin();
  auto b = other.bindings_.begin();
  while (a != bindings_.end() && b != other.bindings_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (a->second != b->second) return false;
      ++a;
      ++b;
    }
  }
  return true;
}

std::optional<Valuation> Valuation::Merge(const Valuation& other) const {
  if (!CompatibleWith(other)) return std::nullopt;
  Valuation out;
  out.bindings_.reserve(bindings_.size() + other.bindings_.size());
  std::set_union(bindings_.begin(), bindings_.end(), other.bindings_.begin(),
                 other.bindings_.end(), std::back_inserter(out.bindings_),
                 [](const Binding& x, const Binding& y) {
                   return x.first < y.first;
                 });
  return out;
}

std::string Valuation::ToString() const {
  std::string out;
  for (const auto& [v, t] : bindings_) {
    if (!out.empty()) out.push_back(' ');
    out += v.ToToken();
    out.push_back('=');
    out += t.ToToken();
  }
  return out;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  return std::lexicographical_compare_three_way(
      a.bindings_.begin(), a.bindings_.end(), b.bindings_.begin(),
      b.bindings_.end(), [](const Valuation::Binding& x,
                            const Valuation::Binding& y) {
        if (auto c = x.first <=> y.first; c != 0) return c;
        return x.second <=> y.second;
      });
}

std::size_t HashCombine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace ldq

std::size_t std::hash<ldq::Term>::operator()(
    const ldq::Term& t) const noexcept {
  if (t.is_identifier()) return std::hash<ldq::Identifier>{}(t.identifier());
  return ldq::HashCombine(0x51,
                          std::hash<std::string>{}(t.literal().value()));
}

std::size_t std::hash<ldq::Triple>::operator()(
    const ldq::Triple& t) const noexcept {
  std::size_t h = std::hash<ldq::Identifier>{}(t.subject);
  h = ldq::HashCombine(h, std::hash<ldq::Identifier>{}(t.predicate));
  return ldq::HashCombine(h, std::hash<ldq::Term>{}(t.object));
}

std::size_t std::hash<ldq::TriplePattern>::operator()(
    const ldq::TriplePattern& tp) const noexcept {
  return std::hash<std::string>{}(tp.ToString());
}

std::size_t std::hash<ldq::Valuation>::operator()(
    const ldq::Valuation& v) const noexcept {
  std::size_t h = v.size();
  for (const auto& [var, term] : v) {
    h = ldq::HashCombine(h, std::hash<ldq::Variable>{}(var));
    h = ldq::HashCombine(h, std::hash<ldq::Term>{}(term));
  }
  return h;
}
