#pragma once

// Random webs, queries and values for property tests and benchmarks. All
// generators are deterministic in the RNG state.

#include <cstdint>
#include <random>

#include "ldq/query.hpp"
#include "ldq/terms.hpp"
#include "ldq/web.hpp"

namespace ldq {

using Rng = std::mt19937_64;

struct SynthParams {
  std::size_t max_documents = 30;
  std::size_t max_triples_per_document = 5;
  std::size_t max_patterns = 4;
  std::size_t max_seeds = 3;
  // Identifiers beyond one per document; about half of them are mapped.
  std::size_t extra_identifiers = 10;
  std::size_t predicates = 4;
  std::size_t literals = 3;
  double literal_object = 0.15;
};

// Documents d0..dn-1; identifier i<j> is mapped to d<j> for j < n so every
// document is reachable by name. Predicates p<k> are identifiers too and
// are sometimes mapped, so links also run through predicate positions.
FiniteWeb RandomWeb(Rng& rng, const SynthParams& params = {});

// 1..max_patterns patterns abstracted from triples of `data` (or, rarely,
// from random terms): each position becomes a variable with some
// probability, and equal terms share their variable so patterns join.
Bqp RandomBqp(Rng& rng, std::span<const Triple> data,
              const SynthParams& params = {});

// 0..max_seeds identifiers, mostly ones mapped in `w`.
std::vector<Identifier> RandomSeeds(Rng& rng, const FiniteWeb& w,
                                    const SynthParams& params = {});

struct SynthInstance {
  FiniteWeb web;
  Bqp pattern;
  std::vector<Identifier> seeds;

  QuerySpec Spec(ReachabilityCriterion c) const {
    return QuerySpec(pattern, seeds, std::move(c));
  }
};

SynthInstance RandomInstance(std::uint64_t seed,
                             const SynthParams& params = {});

// Values with awkward text: delimiter look-alikes, quotes, backslashes,
// control escapes and non-ASCII bytes.
Identifier RandomIdentifier(Rng& rng);
Literal RandomLiteral(Rng& rng);
Term RandomTerm(Rng& rng);
Triple RandomTriple(Rng& rng);
Variable RandomVariable(Rng& rng);
Valuation RandomValuation(Rng& rng, std::size_t max_size = 5);

}  // namespace ldq
