#pragma once

// Webs of Linked Data. A web is seen only through Deref: looking up an
// identifier yields the document it is mapped to, or nothing. Finite webs
// can additionally list their documents and the identifier mapping; the
// infinite ones refuse with InfiniteWeb instead of hanging.
//
// Implementations are immutable after construction (or, for remote webs,
// internally synchronized), so Deref may be called from several threads.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldq/terms.hpp"

namespace ldq {

class DocumentId {
 public:
  // Throws InvalidValue unless IsPlainToken(value).
  explicit DocumentId(std::string value);

  const std::string& value() const { return value_; }

  friend bool operator==(const DocumentId&, const DocumentId&) = default;
  friend std::strong_ordering operator<=>(const DocumentId& a,
                                          const DocumentId& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

// An LD document: its id and a finite, duplicate-free triple set stored in
// triple order.
class Document {
 public:
  Document(DocumentId id, std::vector<Triple> triples);

  const DocumentId& id() const { return id_; }
  std::span<const Triple> triples() const { return triples_; }

  friend bool operator==(const Document&, const Document&) = default;

 private:
  DocumentId id_;
  std::vector<Triple> triples_;
};

using DocumentPtr = std::shared_ptr<const Document>;

class Web {
 public:
  virtual ~Web() = default;

  // The document `u` is mapped to, or nullptr if u is not in dom(adoc).
  virtual DocumentPtr Deref(const Identifier& u) const = 0;

  virtual bool IsFinite() const = 0;

  // All documents, ordered by id. Throws InfiniteWeb.
  virtual std::vector<DocumentPtr> Documents() const;

  // The adoc mapping as (identifier, document) pairs ordered by identifier.
  // Throws InfiniteWeb.
  virtual std::vector<std::pair<Identifier, DocumentId>> Mapping() const;

  // Identifiers mapped to `doc`, ordered. Throws InfiniteWeb.
  std::vector<Identifier> IdentifiersOf(const DocumentId& doc) const;
};

// An in-memory finite web.
class FiniteWeb final : public Web {
 public:
  FiniteWeb() = default;

  // Throws UnknownDocument if a mapping targets a missing document,
  // SurjectivityError if a document has no identifier, InvalidValue on
  // duplicate document ids.
  FiniteWeb(std::vector<Document> documents,
            std::map<Identifier, DocumentId> mapping);

  DocumentPtr Deref(const Identifier& u) const override;
  bool IsFinite() const override { return true; }
  std::vector<DocumentPtr> Documents() const override;
  std::vector<std::pair<Identifier, DocumentId>> Mapping() const override;

  std::size_t document_count() const { return documents_.size(); }
  DocumentPtr Find(const DocumentId& id) const;

  friend bool operator==(const FiniteWeb& a, const FiniteWeb& b);

 private:
  std::map<DocumentId, DocumentPtr> documents_;
  std::map<Identifier, DocumentId> mapping_;
};

// Copies any finite web into a FiniteWeb. Throws InfiniteWeb.
FiniteWeb Materialize(const Web& w);

// The induced subweb on `keep`: same data for kept documents, adoc
// restricted to identifiers mapped into `keep`. Throws UnknownDocument if
// `keep` names a document of no w, InfiniteWeb if w is infinite.
FiniteWeb InducedSubweb(const Web& w, const std::set<DocumentId>& keep);

// AllData(W): union of the triples of all documents, in triple order.
// Throws InfiniteWeb.
std::vector<Triple> AllData(const Web& w);

struct LinkEdge {
  DocumentId source;
  DocumentId target;
  Triple label;

  friend bool operator==(const LinkEdge&, const LinkEdge&) = default;
  friend auto operator<=>(const LinkEdge&, const LinkEdge&) = default;
};

// Directed, edge-labeled multigraph: an edge (dh, dt, t) for every
// t ∈ data(dh) with some u ∈ ids(t) mapped to dt.
struct WebLinkGraph {
  std::vector<DocumentId> vertices;  // ordered
  std::vector<LinkEdge> edges;       // ordered, duplicate-free
};

// Throws InfiniteWeb.
WebLinkGraph LinkGraph(const Web& w);

// Lazily generated web over the natural numbers: no_k derefs to d_k with
// (no_k, succ, no_{k+1}) and (no_k, div, no_y) for each divisor y of k.
// succ and div are not dereferenceable. With a modulus m only k <= m are
// dereferenceable, which makes the web finite.
class NumberWeb final : public Web {
 public:
  explicit NumberWeb(std::optional<std::uint64_t> modulus = std::nullopt);

  DocumentPtr Deref(const Identifier& u) const override;
  bool IsFinite() const override { return modulus_.has_value(); }
  std::vector<DocumentPtr> Documents() const override;
  std::vector<std::pair<Identifier, DocumentId>> Mapping() const override;

  static Identifier NumberId(std::uint64_t k);
  static DocumentId DocId(std::uint64_t k);
  static Document MakeDocument(std::uint64_t k);

 private:
  std::optional<std::uint64_t> modulus_;
};

// Fixture text format:
//   doc <doc-id>           starts a document block
//   uri <identifier>       maps the identifier to the current document
//   t <s> <p> <o>          adds a triple; literal objects are "..." quoted
// '#' at the start of a line comments it out.
//
// Throws ParseError, SurjectivityError, DuplicateMapping.
FiniteWeb LoadFixture(std::string_view text);

// Fixture text for a finite web: documents by id, uri lines and triples in
// order. LoadFixture(WriteFixture(w)) == Materialize(w).
std::string WriteFixture(const Web& w);

}  // namespace ldq

template <>
struct std::hash<ldq::DocumentId> {
  std::size_t operator()(const ldq::DocumentId& d) const noexcept {
    return std::hash<std::string>{}(d.value());
  }
};
