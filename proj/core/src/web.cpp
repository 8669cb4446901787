#include "ldq/web.hpp"

#include <algorithm>
#include <charconv>

#include "ldq/errors.hpp"
#include "ldq/lexer.hpp"

namespace ldq {

DocumentId::DocumentId(std::string value) : value_(std::move(value)) {
  if (!IsPlainToken(value_)) {
    throw InvalidValue("invalid document id '" + value_ + "'");
  }
}

Document::Document(DocumentId id, std::vector<Triple> triples)
    : id_(std::move(id)), triples_(std::move(triples)) {
  std::sort(triples_.begin(), triples_.end());
  triples_.erase(std::unique(triples_.begin(), triples_.end()),
                 triples_.end());
}

std::vector<DocumentPtr> Web::Documents() const {
  throw InfiniteWeb("web cannot enumerate its documents");
}

std::vector<std::pair<Identifier, DocumentId>> Web::Mapping() const {
  throw InfiniteWeb("web cannot enumerate its identifiers");
}

std::vector<Identifier> Web::IdentifiersOf(const DocumentId& doc) const {
  std::vector<Identifier> out;
  for (auto& [u, d] : Mapping()) {
    if (d == doc) out.push_back(u);
  }
  return out;
}

FiniteWeb::FiniteWeb(std::vector<Document> documents,
                     std::map<Identifier, DocumentId> mapping)
    : mapping_(std::move(mapping)) {
  for (auto& doc : documents) {
    DocumentId id = doc.id();
    auto [it, inserted] = documents_.emplace(
        id, std::make_shared<const Document>(std::move(doc)));
    if (!inserted) {
      throw InvalidValue("duplicate document id '" + id.value() + "'");
    }
  }
  std::set<DocumentId> mapped;
  for (const auto& [u, d] : mapping_) {
    if (!documents_.contains(d)) {
      throw UnknownDocument("identifier '" + u.value() +
                            "' mapped to unknown document '" + d.value() +
                            "'");
    }
    mapped.insert(d);
  }
  for (const auto& [id, doc] : documents_) {
    if (!mapped.contains(id)) {
      throw SurjectivityError("document '" + id.value() +
                              "' has no identifier mapped to it");
    }
  }
}

DocumentPtr FiniteWeb::Deref(const Identifier& u) const {
  auto it = mapping_.find(u);
  if (it == mapping_.end()) return nullptr;
  return documents_.at(it->second);
}

std::vector<DocumentPtr> FiniteWeb::Documents() const {
  std::vector<DocumentPtr> out;
  out.reserve(documents_.size());
  for (const auto& [id, doc] : documents_) out.push_back(doc);
  return out;
}

std::vector<std::pair<Identifier, DocumentId>> FiniteWeb::Mapping() const {
  return {mapping_.begin(), mapping_.end()};
}

DocumentPtr FiniteWeb::Find(const DocumentId& id) const {
  auto it = documents_.find(id);
  return it == documents_.end() ? nullptr : it->second;
}

bool operator==(const FiniteWeb& a, const FiniteWeb& b) {
  if (a.mapping_ != b.mapping_) return false;
  if (a.documents_.size() != b.documents_.size()) return false;
  return std::equal(a.documents_.begin(), a.documents_.end(),
                    b.documents_.begin(), [](const auto& x, const auto& y) {
                      return x.first == y.first && *x.second == *y.second;
                    });
}

FiniteWeb Materialize(const Web& w) {
  if (const auto* fw = dynamic_cast<const FiniteWeb*>(&w)) return *fw;
  std::vector<Document> docs;
  for (const auto& d : w.Documents()) docs.push_back(*d);
  auto pairs = w.Mapping();
  return FiniteWeb(std::move(docs), {pairs.begin(), pairs.end()});
}

FiniteWeb InducedSubweb(const Web& w, const std::set<DocumentId>& keep) {
  std::vector<Document> docs;
  std::set<DocumentId> seen;
  for (const auto& d : w.Documents()) {
    if (keep.contains(d->id())) {
      docs.push_back(*d);
      seen.insert(d->id());
    }
  }
  for (const auto& k : keep) {
    if (!seen.contains(k)) {
      throw UnknownDocument("document '" + k.value() + "' is not in the web");
    }
  }
  std::map<Identifier, DocumentId> mapping;
  for (auto& [u, d] : w.Mapping()) {
    if (keep.contains(d)) mapping.emplace(u, d);
  }
  return FiniteWeb(std::move(docs), std::move(mapping));
}

std::vector<Triple> AllData(const Web& w) {
  std::vector<Triple> out;
  for (const auto& d : w.Documents()) {
    out.insert(out.end(), d->triples().begin(), d->triples().end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WebLinkGraph LinkGraph(const Web& w) {
  WebLinkGraph g;
  auto docs = w.Documents();
  for (const auto& d : docs) g.vertices.push_back(d->id());
  for (const auto& d : docs) {
    for (const Triple& t : d->triples()) {
      std::set<DocumentId> targets;
      for (const Identifier& u : IdsOf(t)) {
        if (DocumentPtr target = w.Deref(u)) targets.insert(target->id());
      }
      for (const auto& target : targets) {
        g.edges.push_back(LinkEdge{d->id(), target, t});
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

// ---------------------------------------------------------------------------
// NumberWeb

namespace {

// Keeps trial division cheap; larger numbers are not dereferenceable.
constexpr std::uint64_t kMaxNumber = 1'000'000'000'000ULL;

std::optional<std::uint64_t> ParseNumberId(std::string_view text) {
  constexpr std::string_view kPrefix = "no_";
  if (!text.starts_with(kPrefix)) return std::nullopt;
  text.remove_prefix(kPrefix.size());
  if (text.empty() || text.front() == '0') return std::nullopt;
  std::uint64_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  if (k > kMaxNumber) return std::nullopt;
  return k;
}

}  // namespace

NumberWeb::NumberWeb(std::optional<std::uint64_t> modulus)
    : modulus_(modulus) {
  if (modulus_ && *modulus_ > kMaxNumber) {
    throw InvalidValue("number web modulus too large");
  }
}

Identifier NumberWeb::NumberId(std::uint64_t k) {
  return Identifier("no_" + std::to_string(k));
}

DocumentId NumberWeb::DocId(std::uint64_t k) {
  return DocumentId("d_" + std::to_string(k));
}

Document NumberWeb::MakeDocument(std::uint64_t k) {
  static const Identifier kSucc("succ");
  static const Identifier kDiv("div");
  Identifier self = NumberId(k);
  std::vector<Triple> triples{Triple{self, kSucc, NumberId(k + 1)}};
  for (std::uint64_t y = 1; y * y <= k; ++y) {
    if (k % y != 0) continue;
    triples.push_back(Triple{self, kDiv, NumberId(y)});
    if (y != k / y) triples.push_back(Triple{self, kDiv, NumberId(k / y)});
  }
  return Document(DocId(k), std::move(triples));
}

DocumentPtr NumberWeb::Deref(const Identifier& u) const {
  auto k = ParseNumberId(u.value());
  if (!k) return nullptr;
  if (modulus_ && *k > *modulus_) return nullptr;
  return std::make_shared<const Document>(MakeDocument(*k));
}

std::vector<DocumentPtr> NumberWeb::Documents() const {
  if (!modulus_) return Web::Documents();
  std::vector<DocumentPtr> out;
  for (std::uint64_t k = 1; k <= *modulus_; ++k) {
    out.push_back(std::make_shared<const Document>(MakeDocument(k)));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a->id() < b->id(); });
  return out;
}

std::vector<std::pair<Identifier, DocumentId>> NumberWeb::Mapping() const {
  if (!modulus_) return Web::Mapping();
  std::vector<std::pair<Identifier, DocumentId>> out;
  for (std::uint64_t k = 1; k <= *modulus_; ++k) {
    out.emplace_back(NumberId(k), DocId(k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Fixture format

FiniteWeb LoadFixture(std::string_view text) {
  std::vector<DocumentId> order;
  std::map<DocumentId, std::vector<Triple>> triples;
  std::map<Identifier, DocumentId> mapping;
  std::optional<DocumentId> current;

  auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    if (IsCommentOrBlank(lines[i])) continue;
    auto toks = TokenizeLine(lines[i], line_no);
    const Token& head = toks.front();
    auto expect_args = [&](std::size_t n) {
      if (toks.size() != n + 1) {
        throw ParseError("'" + head.text + "' takes " + std::to_string(n) +
                             " argument(s)",
                         line_no, head.column);
      }
    };
    auto require_doc = [&]() -> const DocumentId& {
      if (!current) {
        throw ParseError("'" + head.text + "' outside a document block",
                         line_no, head.column);
      }
      return *current;
    };

    if (head.quoted) {
      throw ParseError("expected directive", line_no, head.column);
    }
    if (head.text == "doc") {
      expect_args(1);
      if (toks[1].quoted || !IsPlainToken(toks[1].text)) {
        throw ParseError("invalid document id", line_no, toks[1].column);
      }
      DocumentId id(toks[1].text);
      if (triples.contains(id)) {
        throw ParseError("duplicate document '" + id.value() + "'", line_no,
                         toks[1].column);
      }
      triples.emplace(id, std::vector<Triple>{});
      order.push_back(id);
      current = id;
    } else if (head.text == "uri") {
      expect_args(1);
      const DocumentId& doc = require_doc();
      Identifier u = IdentifierFromToken(toks[1]);
      auto [it, inserted] = mapping.emplace(u, doc);
      if (!inserted && it->second != doc) {
        throw DuplicateMapping("identifier '" + u.value() +
                               "' mapped to both '" + it->second.value() +
                               "' and '" + doc.value() + "' (line " +
                               std::to_string(line_no) + ")");
      }
    } else if (head.text == "t") {
      expect_args(3);
      const DocumentId& doc = require_doc();
      triples[doc].push_back(Triple{IdentifierFromToken(toks[1]),
                                    IdentifierFromToken(toks[2]),
                                    TermFromToken(toks[3])});
    } else {
      throw ParseError("unknown directive '" + head.text + "'", line_no,
                       head.column);
    }
  }

  std::vector<Document> docs;
  for (const auto& id : order) docs.emplace_back(id, std::move(triples[id]));
  return FiniteWeb(std::move(docs), std::move(mapping));
}

std::string WriteFixture(const Web& w) {
  auto mapping = w.Mapping();
  std::string out;
  for (const auto& d : w.Documents()) {
    out += "doc " + d->id().value() + "\n";
    for (const auto& [u, target] : mapping) {
      if (target == d->id()) out += "uri " + u.value() + "\n";
    }
    for (const Triple& t : d->triples()) out += "t " + ToString(t) + "\n";
  }
  return out;
}

}  // namespace ldq
