#include "ldq/synth.hpp"

#include <algorithm>
#include <map>

namespace ldq {
namespace {

std::size_t Uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool Chance(Rng& rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

Identifier Id(std::string_view prefix, std::size_t k) {
  return Identifier(std::string(prefix) + std::to_string(k));
}

std::string RandomText(Rng& rng, std::string_view alphabet, std::size_t lo,
                       std::size_t hi) {
  std::string out;
  std::size_t n = Uniform(rng, lo, hi);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(alphabet[Uniform(rng, 0, alphabet.size() - 1)]);
  }
  return out;
}

constexpr std::string_view kPlain =
    "abcxyz019_:/.#<>,-?!\\'\xc3\xa9";  // é as two bytes

}  // namespace

FiniteWeb RandomWeb(Rng& rng, const SynthParams& params) {
  const std::size_t n = Uniform(rng, 1, params.max_documents);
  const std::size_t ids = n + params.extra_identifiers;

  std::map<Identifier, DocumentId> mapping;
  for (std::size_t j = 0; j < n; ++j) {
    mapping.emplace(Id("i", j), DocumentId("d" + std::to_string(j)));
  }
  for (std::size_t j = n; j < ids; ++j) {
    if (Chance(rng, 0.5)) {
      mapping.emplace(Id("i", j),
                      DocumentId("d" + std::to_string(Uniform(rng, 0, n - 1))));
    }
  }
  for (std::size_t k = 0; k < params.predicates; ++k) {
    if (Chance(rng, 0.25)) {
      mapping.emplace(Id("p", k),
                      DocumentId("d" + std::to_string(Uniform(rng, 0, n - 1))));
    }
  }

  std::vector<Document> docs;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Triple> triples;
    std::size_t m = Uniform(rng, 0, params.max_triples_per_document);
    for (std::size_t k = 0; k < m; ++k) {
      Identifier s = Chance(rng, 0.5) ? Id("i", j) : Id("i", Uniform(rng, 0, ids - 1));
      Identifier p = Id("p", Uniform(rng, 0, params.predicates - 1));
      Term o = Chance(rng, params.literal_object)
                   ? Term(Literal("l" + std::to_string(
                                            Uniform(rng, 0, params.literals - 1))))
                   : Term(Id("i", Uniform(rng, 0, ids - 1)));
      triples.push_back(Triple{std::move(s), std::move(p), std::move(o)});
    }
    docs.emplace_back(DocumentId("d" + std::to_string(j)), std::move(triples));
  }
  return FiniteWeb(std::move(docs), std::move(mapping));
}

Bqp RandomBqp(Rng& rng, std::span<const Triple> data,
              const SynthParams& params) {
  const std::size_t n = Uniform(rng, 1, params.max_patterns);
  std::map<Term, Variable> shared;
  std::size_t next_var = 0;
  auto abstract = [&](const Term& t, double p_var) -> PatternTerm {
    auto it = shared.find(t);
    if (it != shared.end() && Chance(rng, 0.8)) return it->second;
    if (!Chance(rng, p_var)) return t;
    Variable v("v" + std::to_string(next_var++));
    shared.insert_or_assign(t, v);
    return v;
  };

  std::vector<TriplePattern> patterns;
  for (std::size_t k = 0; k < n; ++k) {
    Triple t = !data.empty() && Chance(rng, 0.9)
                   ? data[Uniform(rng, 0, data.size() - 1)]
                   : Triple{Id("i", Uniform(rng, 0, 12)),
                            Id("p", Uniform(rng, 0, params.predicates - 1)),
                            Id("i", Uniform(rng, 0, 12))};
    PatternTerm s = abstract(t.subject, 0.5);
    PatternTerm p = abstract(t.predicate, 0.2);
    PatternTerm o = abstract(t.object, 0.6);
    patterns.emplace_back(std::move(s), std::move(p), std::move(o));
  }
  return Bqp(std::move(patterns));
}

std::vector<Identifier> RandomSeeds(Rng& rng, const FiniteWeb& w,
                                    const SynthParams& params) {
  auto mapping = w.Mapping();
  std::vector<Identifier> seeds;
  std::size_t n = Chance(rng, 0.05) ? 0 : Uniform(rng, 1, params.max_seeds);
  for (std::size_t k = 0; k < n; ++k) {
    if (!mapping.empty() && Chance(rng, 0.9)) {
      seeds.push_back(mapping[Uniform(rng, 0, mapping.size() - 1)].first);
    } else {
      seeds.push_back(Id("i", Uniform(rng, 0, 50)));
    }
  }
  return seeds;
}

SynthInstance RandomInstance(std::uint64_t seed, const SynthParams& params) {
  Rng rng(seed);
  FiniteWeb web = RandomWeb(rng, params);
  auto data = AllData(web);
  Bqp pattern = RandomBqp(rng, data, params);
  auto seeds = RandomSeeds(rng, web, params);
  return SynthInstance{std::move(web), std::move(pattern), std::move(seeds)};
}

Identifier RandomIdentifier(Rng& rng) {
  while (true) {
    std::string text = RandomText(rng, kPlain, 1, 8);
    if (text.front() != '?') return Identifier(std::move(text));
  }
}

Literal RandomLiteral(Rng& rng) {
  static constexpr std::string_view kAlphabet =
      "ab z\"\\\n\t\r<>,#?->\xc3\xa9";
  return Literal(RandomText(rng, kAlphabet, 0, 8));
}

Term RandomTerm(Rng& rng) {
  if (Chance(rng, 0.3)) return RandomLiteral(rng);
  return RandomIdentifier(rng);
}

Triple RandomTriple(Rng& rng) {
  return Triple{RandomIdentifier(rng), RandomIdentifier(rng), RandomTerm(rng)};
}

Variable RandomVariable(Rng& rng) {
  return Variable(RandomText(rng, kPlain, 1, 5));
}

Valuation RandomValuation(Rng& rng, std::size_t max_size) {
  Valuation mu;
  std::size_t n = Uniform(rng, 0, max_size);
  for (std::size_t k = 0; k < n; ++k) mu.Bind(RandomVariable(rng), RandomTerm(rng));
  return mu;
}

}  // namespace ldq
