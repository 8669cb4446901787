#pragma once

// Canonical words for triples, triple sets, webs, valuations and valuation
// sets. Tokens are separated by single spaces; delimiters are ASCII
// renderings of the tape alphabet:
//
//   triple         < s , p , o >
//   triple set     << t1 , t2 , ... >>         strictly increasing triple order
//   web            # u1 d1 << ... >> # u2 d2 << ... >> #
//                  one entry per mapped identifier, identifiers increasing;
//                  d is the document id followed by its triple set
//   valuation      << ?a -> x , ?b -> "y" >>   variables increasing
//   valuation set  valuation words separated by whitespace, any order
//
// Decoding is strict about order and shape (MalformedWord) except for the
// order of valuations in a set.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldq/terms.hpp"
#include "ldq/web.hpp"

namespace ldq {

std::string EncodeTriple(const Triple& t);
Triple DecodeTriple(std::string_view word);

// Sorts and de-duplicates before encoding.
std::string EncodeTripleSet(std::span<const Triple> triples);
std::vector<Triple> DecodeTripleSet(std::string_view word);

// Throws InfiniteWeb.
std::string EncodeWeb(const Web& w);
FiniteWeb DecodeWeb(std::string_view word);

std::string EncodeValuation(const Valuation& mu);
Valuation DecodeValuation(std::string_view word);

// Keeps the given order; the caller is responsible for duplicate-freedom.
std::string EncodeValuationSet(std::span<const Valuation> valuations);
// Rejects duplicates.
std::vector<Valuation> DecodeValuationSet(std::string_view word);

}  // namespace ldq
