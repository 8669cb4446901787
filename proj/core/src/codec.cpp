#include "ldq/codec.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "ldq/errors.hpp"
#include "ldq/lexer.hpp"

namespace ldq {
namespace {

void AppendTriple(std::string& out, const Triple& t) {
  out += "< ";
  out += t.subject.value();
  out += " , ";
  out += t.predicate.value();
  out += " , ";
  out += t.object.ToToken();
  out += " >";
}

void AppendTripleSet(std::string& out, std::span<const Triple> sorted) {
  out += "<<";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out += i == 0 ? " " : " , ";
    AppendTriple(out, sorted[i]);
  }
  out += " >>";
}

class WordReader {
 public:
  explicit WordReader(std::string_view word) : word_(word), lex_(word) {}

  template <typename F>
  decltype(auto) Guard(F&& f) {
    try {
      return f();
    } catch (const ParseError& e) {
      throw MalformedWord(std::string("token (") + e.what() + ")",
                          lex_.offset());
    }
  }

  bool AtEnd() { return !Peek(); }

  const Token* Peek() {
    const auto& tok = Guard([&]() -> const std::optional<Token>& {
      return lex_.Peek();
    });
    return tok ? &*tok : nullptr;
  }

  Token Take(const char* expected) {
    auto tok = Guard([&] { return lex_.Next(); });
    if (!tok) throw MalformedWord(expected, word_.size());
    return std::move(*tok);
  }

  // Consumes an unquoted delimiter token.
  void Expect(std::string_view delim) {
    std::string what = "'" + std::string(delim) + "'";
    Token tok = Take(what.c_str());
    if (tok.quoted || tok.text != delim) throw MalformedWord(what, tok.offset);
  }

  bool PeekIs(std::string_view delim) {
    const Token* tok = Peek();
    return tok && !tok->quoted && tok->text == delim;
  }

  Identifier TakeIdentifier() {
    Token tok = Take("identifier");
    if (tok.quoted) throw MalformedWord("identifier", tok.offset);
    try {
      return Identifier(tok.text);
    } catch (const InvalidValue&) {
      throw MalformedWord("identifier", tok.offset);
    }
  }

  Term TakeTerm() {
    Token tok = Take("term");
    if (tok.quoted) return Literal(tok.text);
    try {
      return Identifier(tok.text);
    } catch (const InvalidValue&) {
      throw MalformedWord("term", tok.offset);
    }
  }

  Variable TakeVariable() {
    Token tok = Take("variable");
    if (tok.quoted || tok.text.size() < 2 || tok.text.front() != '?') {
      throw MalformedWord("variable", tok.offset);
    }
    try {
      return Variable(tok.text.substr(1));
    } catch (const InvalidValue&) {
      throw MalformedWord("variable", tok.offset);
    }
  }

  DocumentId TakeDocumentId() {
    Token tok = Take("document id");
    if (tok.quoted || !IsPlainToken(tok.text)) {
      throw MalformedWord("document id", tok.offset);
    }
    return DocumentId(tok.text);
  }

  Triple TakeTriple() {
    Expect("<");
    Identifier s = TakeIdentifier();
    Expect(",");
    Identifier p = TakeIdentifier();
    Expect(",");
    Term o = TakeTerm();
    Expect(">");
    return Triple{std::move(s), std::move(p), std::move(o)};
  }

  std::vector<Triple> TakeTripleSet() {
    Expect("<<");
    std::vector<Triple> out;
    if (PeekIs(">>")) {
      Take("'>>'");
      return out;
    }
    while (true) {
      std::size_t at = Offset();
      Triple t = TakeTriple();
      if (!out.empty() && !(out.back() < t)) {
        throw MalformedWord("triples in strictly increasing order", at);
      }
      out.push_back(std::move(t));
      if (PeekIs(">>")) {
        Take("'>>'");
        return out;
      }
      Expect(",");
    }
  }

  Valuation TakeValuation() {
    Expect("<<");
    Valuation mu;
    if (PeekIs(">>")) {
      Take("'>>'");
      return mu;
    }
    std::optional<Variable> last;
    while (true) {
      std::size_t at = Offset();
      Variable v = TakeVariable();
      if (last && !(*last < v)) {
        throw MalformedWord("variables in strictly increasing order", at);
      }
      Expect("->");
      mu.Bind(v, TakeTerm());
      last = std::move(v);
      if (PeekIs(">>")) {
        Take("'>>'");
        return mu;
      }
      Expect(",");
    }
  }

  std::size_t Offset() {
    const Token* tok = Peek();
    return tok ? tok->offset : word_.size();
  }

  void ExpectEnd() {
    if (const Token* tok = Peek()) {
      throw MalformedWord("end of word", tok->offset);
    }
  }

 private:
  std::string_view word_;
  Lexer lex_;
};

}  // namespace

std::string EncodeTriple(const Triple& t) {
  std::string out;
  AppendTriple(out, t);
  return out;
}

Triple DecodeTriple(std::string_view word) {
  WordReader r(word);
  Triple t = r.TakeTriple();
  r.ExpectEnd();
  return t;
}

std::string EncodeTripleSet(std::span<const Triple> triples) {
  std::vector<Triple> sorted(triples.begin(), triples.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::string out;
  AppendTripleSet(out, sorted);
  return out;
}

std::vector<Triple> DecodeTripleSet(std::string_view word) {
  WordReader r(word);
  auto out = r.TakeTripleSet();
  r.ExpectEnd();
  return out;
}

std::string EncodeWeb(const Web& w) {
  std::map<DocumentId, DocumentPtr> docs;
  for (auto& d : w.Documents()) docs.emplace(d->id(), d);
  std::string out = "#";
  for (const auto& [u, d] : w.Mapping()) {
    out += " ";
    out += u.value();
    out += " ";
    out += d.value();
    out += " ";
    AppendTripleSet(out, docs.at(d)->triples());
    out += " #";
  }
  return out;
}

FiniteWeb DecodeWeb(std::string_view word) {
  WordReader r(word);
  r.Expect("#");
  std::map<Identifier, DocumentId> mapping;
  std::map<DocumentId, std::vector<Triple>> data;
  std::optional<Identifier> last;
  while (!r.AtEnd()) {
    std::size_t at = r.Offset();
    Identifier u = r.TakeIdentifier();
    if (last && !(*last < u)) {
      throw MalformedWord("identifiers in strictly increasing order", at);
    }
    at = r.Offset();
    DocumentId d = r.TakeDocumentId();
    auto triples = r.TakeTripleSet();
    auto [it, inserted] = data.emplace(d, triples);
    if (!inserted && it->second != triples) {
      throw MalformedWord("the same triples for every entry of document '" +
                              d.value() + "'",
                          at);
    }
    mapping.emplace(u, d);
    last = std::move(u);
    r.Expect("#");
  }
  std::vector<Document> docs;
  for (auto& [id, triples] : data) docs.emplace_back(id, std::move(triples));
  return FiniteWeb(std::move(docs), std::move(mapping));
}

std::string EncodeValuation(const Valuation& mu) {
  std::string out = "<<";
  bool first = true;
  for (const auto& [v, t] : mu) {
    out += first ? " " : " , ";
    first = false;
    out += v.ToToken();
    out += " -> ";
    out += t.ToToken();
  }
  out += " >>";
  return out;
}

Valuation DecodeValuation(std::string_view word) {
  WordReader r(word);
  Valuation mu = r.TakeValuation();
  r.ExpectEnd();
  return mu;
}

std::string EncodeValuationSet(std::span<const Valuation> valuations) {
  std::string out;
  for (const auto& mu : valuations) {
    if (!out.empty()) out += " ";
    out += EncodeValuation(mu);
  }
  return out;
}

std::vector<Valuation> DecodeValuationSet(std::string_view word) {
  WordReader r(word);
  std::vector<Valuation> out;
  std::unordered_set<Valuation> seen;
  while (!r.AtEnd()) {
    std::size_t at = r.Offset();
    Valuation mu = r.TakeValuation();
    if (!seen.insert(mu).second) {
      throw MalformedWord("distinct valuations", at);
    }
    out.push_back(std::move(mu));
  }
  return out;
}

}  // namespace ldq
