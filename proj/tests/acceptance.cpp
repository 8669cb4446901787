// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include "cli.hpp"
#include "ldq/codec.hpp"
#include "ldq/engines.hpp"
#include "ldq/lexer.hpp"
#include "ldq/netweb.hpp"
#include "oracles.hpp"

namespace ldq {
namespace {

using testing::Describe;

std::string ReadData(const std::string& name) {
  std::ifstream in(std::string(LDQ_TEST_DATA) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Valuation> Sorted(std::vector<Valuation> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Valuation Val(std::initializer_list<std::pair<const char*, Term>> binds) {
  Valuation mu;
  for (const auto& [v, t] : binds) mu.Bind(Variable(v), t);
  return mu;
}

Identifier I(const char* s) { return Identifier(s); }

struct Outcome {
  bool pass;
  std::string detail;
};

// ---------------------------------------------------------------------------

struct EngineResult {
  std::vector<Valuation> solutions;
  std::size_t derefs;
  bool exhausted;
};

// Webs that are not known to be finite need a deref budget; this one is far
// above what the runs below use, so hitting it shows up as a failure.
Budget Generous(const Web& w) {
  Budget b;
  if (!w.IsFinite()) b.max_derefs = 100;
  return b;
}

EngineResult RunNamed(const std::string& engine, const Web& w,
                      const QuerySpec& q, std::optional<Budget> budget = {}) {
  Budget b = budget ? *budget : Generous(w);
  std::unique_ptr<SolutionStream> s;
  if (engine == "oracle") s = MakeOracleStream(w, q, b);
  if (engine == "machine") s = MakeMachineStream(w, q, b);
  if (engine == "ltb") s = MakeLtbStream(w, q, b);
  if (engine == "iterator") s = MakeIteratorStream(w, q, {}, b);
  EngineRun run = Drain(*s);
  return {run.solutions, run.stats.derefs, run.exhausted};
}

const std::vector<std::string> kEngines = {"oracle", "machine", "ltb",
                                           "iterator"};

QuerySpec BobQuery() {
  return QuerySpec(ParseQuery(ReadData("fig1.q")), {I("http://bob.name")},
                   ReachabilityCriterion::Match());
}

Outcome Criterion1(const Web& bob) {
  const std::vector<Valuation> expected = {
      Val({{"p", I("http://alice.name")},
           {"pr", I("http://x/AlicesPrj")},
           {"l", Literal("Alice's Project")}})};
  for (const auto& e : kEngines) {
    auto r = RunNamed(e, bob, BobQuery());
    if (!r.exhausted || r.solutions != expected) {
      return {false, e + " gave " + Describe(r.solutions)};
    }
  }
  return {true, "1 solution on 4 engines"};
}

Bqp B1() {
  return Bqp{TriplePattern(I("no_2"), I("succ"), Variable("x"))};
}

Bqp B2() { return ParseQuery(ReadData("b2.q")); }

std::vector<std::string> Names(const std::vector<DocumentId>& ids) {
  std::vector<std::string> out;
  for (const auto& d : ids) out.push_back(d.value());
  std::sort(out.begin(), out.end());
  return out;
}

Outcome Criterion2(const Web& numbers, bool remote) {
  auto spec = [](ReachabilityCriterion c) {
    return QuerySpec(B1(), {I("no_2")}, std::move(c));
  };
  auto prefix = remote ? std::string("remote:no_") : std::string("d_");
  auto rm = ReachablePart(numbers, spec(ReachabilityCriterion::Match()), 100);
  auto rn = ReachablePart(numbers, spec(ReachabilityCriterion::None()),
                          std::nullopt);
  std::vector<std::string> want_match = {prefix + "2", prefix + "3"};
  std::vector<std::string> want_none = {prefix + "2"};
  if (Names(rm.documents) != want_match || !rm.complete) {
    return {false, "match reachable part wrong"};
  }
  if (Names(rn.documents) != want_none || !rn.complete) {
    return {false, "none reachable part wrong"};
  }
  const std::vector<Valuation> expected = {Val({{"x", I("no_3")}})};
  for (auto c : {ReachabilityCriterion::None(), ReachabilityCriterion::Match()}) {
    EngineRun run = Drain(*MakeMachineStream(numbers, spec(c), Generous(numbers)));
    if (!run.exhausted || run.solutions != expected) {
      return {false, "machine under " + c.name() + " gave " +
                         Describe(run.solutions)};
    }
  }
  Budget b;
  b.max_derefs = 100;
  EngineRun all =
      Drain(*MakeMachineStream(numbers, spec(ReachabilityCriterion::All()), b));
  if (all.exhausted || all.stop_reason.empty() || all.solutions != expected) {
    return {false, "machine under all: " + Describe(all.solutions)};
  }
  return {true, "reach {d_2,d_3}/{d_2}; {?x=no_3} under none, match, all"};
}

Outcome Criterion3() {
  std::ostringstream out, err;
  int code = cli::RunCli(
      {"run", "--web", "gen:numbers", "--query",
       std::string(LDQ_TEST_DATA) + "/b2.q", "--seed", "no_2", "--criterion",
       "match", "--engine", "ltb", "--max-derefs", "60"},
      out, err);
  if (code != cli::kBudgetStop) {
    return {false, "exit code " + std::to_string(code)};
  }
  std::regex shape(R"(\?x=no_3 \?y=no_4 \?z=no_(\d+))");
  std::set<long> multiples;
  std::istringstream lines(out.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, shape)) {
      return {false, "unexpected solution '" + line + "'"};
    }
    long z = std::stol(m[1]);
    if (z % 3 != 0 || z < 3) return {false, "?z=no_" + m[1].str()};
    multiples.insert(z / 3);
    ++count;
  }
  if (!multiples.contains(1) || !multiples.contains(2)) {
    return {false, "mu_1 or mu_2 missing"};
  }
  return {true, std::to_string(count) + " solutions, all mu_i, exit 2"};
}

Outcome Criterion4() {
  std::string r = testing::RunCases(1, 200, testing::CheckOracleEquivalence);
  if (!r.empty()) return {false, r};
  return {true, "200 webs x {match, all, none}, ltb x 12 policies"};
}

Outcome Criterion5() {
  bool strict = false;
  std::string r = testing::RunCases(1, 200, [&](std::uint64_t seed) {
    return testing::CheckIteratorSubset(seed, &strict);
  });
  if (!r.empty()) return {false, r};
  if (!strict) return {false, "no instance with a strict subset"};
  return {true, "200 webs, all orders subset; strict subset witnessed"};
}

Outcome Criterion6() {
  const std::pair<const char*, std::function<std::string(std::uint64_t)>>
      props[] = {
          {"monotonicity", testing::CheckExpansionMonotone},
          {"closedness", testing::CheckExpansionClosed},
          {"match boundedness", testing::CheckMatchBoundedness},
          {"augmentation soundness", testing::CheckAugmentationSound},
          {"criterion monotonicity", testing::CheckCriterionMonotone},
      };
  for (const auto& [name, check] : props) {
    std::string r = testing::RunCases(1000, 500, check);
    if (!r.empty()) return {false, std::string(name) + ": " + r};
  }
  return {true, "5 properties x 500 cases"};
}

Outcome Criterion7() {
  NumberWeb numbers;
  QuerySpec q(B2(), {I("no_2")}, ReachabilityCriterion::Match());
  for (const std::string engine : {"machine", "ltb"}) {
    for (std::size_t k : {10, 20, 40}) {
      Budget small, large;
      small.max_derefs = k;
      large.max_derefs = 2 * k;
      auto a = RunNamed(engine, numbers, q, small).solutions;
      auto b = RunNamed(engine, numbers, q, large).solutions;
      if (a.size() > b.size() || !std::equal(a.begin(), a.end(), b.begin())) {
        return {false, engine + " k=" + std::to_string(k) + ": " +
                           Describe(a) + " vs " + Describe(b)};
      }
    }
  }
  return {true, "machine, ltb; k = 10, 20, 40"};
}

FiniteWeb RandomOddWeb(Rng& rng) {
  std::uniform_int_distribution<int> n_docs(0, 6), n_triples(0, 4), n_ids(1, 3);
  std::vector<Document> docs;
  std::map<Identifier, DocumentId> mapping;
  int n = n_docs(rng);
  for (int d = 0; d < n; ++d) {
    DocumentId id(RandomIdentifier(rng).value() + "#" + std::to_string(d));
    std::vector<Triple> triples;
    for (int k = n_triples(rng); k > 0; --k) triples.push_back(RandomTriple(rng));
    docs.emplace_back(id, std::move(triples));
    for (int k = n_ids(rng); k > 0; --k) mapping.insert_or_assign(RandomIdentifier(rng), id);
  }
  // Keep it surjective: every document needs an identifier.
  std::set<DocumentId> mapped;
  for (const auto& [u, d] : mapping) mapped.insert(d);
  for (const auto& d : docs) {
    if (!mapped.contains(d.id())) mapping.emplace(Identifier("id:" + d.id().value()), d.id());
  }
  return FiniteWeb(std::move(docs), std::move(mapping));
}

template <typename T>
std::string CheckCodecClass(const char* name, Rng& rng,
                            const std::function<T(Rng&)>& gen,
                            const std::function<std::string(const T&)>& enc,
                            const std::function<T(std::string_view)>& dec) {
  std::vector<std::pair<T, std::string>> seen;
  for (int i = 0; i < 1000; ++i) {
    T x = gen(rng);
    std::string w = enc(x);
    T y = dec(w);
    if (!(y == x)) return std::string(name) + ": roundtrip failed for " + w;
    if (enc(y) != w) return std::string(name) + ": re-encode differs for " + w;
    seen.emplace_back(std::move(x), std::move(w));
  }
  // Canonicity on pairs: equal words exactly when equal values.
  for (std::size_t i = 0; i + 1 < seen.size(); ++i) {
    const auto& [x, wx] = seen[i];
    const auto& [y, wy] = seen[i + 1];
    if ((x == y) != (wx == wy)) {
      return std::string(name) + ": canonicity broken for " + wx + " / " + wy;
    }
  }
  return {};
}

// Triples of a triple-set word in the order they are written, read
// positionally from the token stream.
std::vector<Triple> SplitTripleSet(const std::string& word) {
  std::vector<Token> toks;
  Lexer lex(word);
  while (auto t = lex.Next()) toks.push_back(std::move(*t));
  std::vector<Triple> out;
  for (std::size_t i = 1; i + 6 < toks.size(); i += 8) {
    out.push_back(Triple{Identifier(toks[i + 1].text),
                         Identifier(toks[i + 3].text),
                         TermFromToken(toks[i + 5])});
  }
  return out;
}

Outcome Criterion8() {
  Rng rng(8);
  std::vector<std::string> failures;
  auto add = [&](std::string r) {
    if (!r.empty()) failures.push_back(std::move(r));
  };
  add(CheckCodecClass<Triple>(
      "triple", rng, RandomTriple, EncodeTriple, DecodeTriple));
  add(CheckCodecClass<std::vector<Triple>>(
      "triple set", rng,
      [](Rng& r) {
        std::set<Triple> s;
        for (int k = std::uniform_int_distribution<int>(0, 6)(r); k > 0; --k) {
          s.insert(RandomTriple(r));
        }
        return std::vector<Triple>(s.begin(), s.end());
      },
      [](const std::vector<Triple>& v) { return EncodeTripleSet(v); },
      DecodeTripleSet));
  add(CheckCodecClass<FiniteWeb>(
      "web", rng, RandomOddWeb,
      [](const FiniteWeb& w) { return EncodeWeb(w); }, DecodeWeb));
  add(CheckCodecClass<Valuation>(
      "valuation", rng, [](Rng& r) { return RandomValuation(r); },
      EncodeValuation, DecodeValuation));
  add(CheckCodecClass<std::vector<Valuation>>(
      "valuation set", rng,
      [](Rng& r) {
        std::vector<Valuation> v;
        std::set<Valuation> s;
        for (int k = std::uniform_int_distribution<int>(0, 5)(r); k > 0; --k) {
          Valuation mu = RandomValuation(r, 3);
          if (s.insert(mu).second) v.push_back(std::move(mu));
        }
        return v;
      },
      [](const std::vector<Valuation>& v) { return EncodeValuationSet(v); },
      DecodeValuationSet));

  // Order invariants and .ldweb byte-exactness.
  for (int i = 0; i < 1000 && failures.empty(); ++i) {
    std::set<Triple> s;
    for (int k = std::uniform_int_distribution<int>(0, 6)(rng); k > 0; --k) {
      s.insert(RandomTriple(rng));
    }
    std::vector<Triple> shuffled(s.begin(), s.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::string w = EncodeTripleSet(shuffled);
    auto parts = SplitTripleSet(w);
    if (!std::is_sorted(parts.begin(), parts.end()) ||
        std::adjacent_find(parts.begin(), parts.end()) != parts.end() ||
        parts.size() != s.size()) {
      failures.push_back("triple order invariant broken in " + w);
    }
    FiniteWeb web = RandomOddWeb(rng);
    std::string ldweb = EncodeWeb(web) + "\n";
    std::string again = EncodeWeb(DecodeWeb(ldweb)) + "\n";
    if (again != ldweb) failures.push_back(".ldweb not byte-exact: " + ldweb);
    auto mapping = web.Mapping();
    for (std::size_t k = 1; k < mapping.size(); ++k) {
      if (!(mapping[k - 1].first < mapping[k].first)) {
        failures.push_back("identifier order broken");
      }
    }
  }
  FiniteWeb bob = LoadFixture(ReadData("bob.fixture"));
  if (DecodeWeb(EncodeWeb(bob)) != bob) failures.push_back("bob roundtrip");
  if (!failures.empty()) return {false, failures.front()};
  return {true, "5 classes x 1000 values; .ldweb byte-exact"};
}

Outcome Criterion9(const FiniteWeb& bob) {
  NumberWeb numbers;
  WebServer bob_server(bob, Address{"127.0.0.1", 0});
  WebServer num_server(numbers, Address{"127.0.0.1", 0});
  RemoteWeb remote_bob(Address{"127.0.0.1", bob_server.port()});
  RemoteWeb remote_numbers(Address{"127.0.0.1", num_server.port()});

  if (auto r = Criterion1(remote_bob); !r.pass) return {false, "c1: " + r.detail};
  if (auto r = Criterion2(remote_numbers, true); !r.pass) {
    return {false, "c2: " + r.detail};
  }
  for (const auto& e : kEngines) {
    auto local = RunNamed(e, bob, BobQuery());
    auto remote = RunNamed(e, remote_bob, BobQuery());
    if (local.solutions != remote.solutions || local.derefs != remote.derefs) {
      return {false, e + " differs over the network"};
    }
  }
  auto b1 = [](ReachabilityCriterion c) {
    return QuerySpec(B1(), {I("no_2")}, std::move(c));
  };
  Budget b;
  b.max_derefs = 100;
  for (auto c : {ReachabilityCriterion::None(), ReachabilityCriterion::Match(),
                 ReachabilityCriterion::All()}) {
    auto local = Drain(*MakeMachineStream(numbers, b1(c), b));
    auto remote = Drain(*MakeMachineStream(remote_numbers, b1(c), b));
    if (local.solutions != remote.solutions ||
        local.stats.derefs != remote.stats.derefs ||
        local.exhausted != remote.exhausted) {
      return {false, "machine under " + c.name() + " differs over the network"};
    }
    auto lr = ReachablePart(numbers, b1(c), 100);
    auto rr = ReachablePart(remote_numbers, b1(c), 100);
    if (lr.derefs_used != rr.derefs_used || lr.data != rr.data) {
      return {false, "reachable part under " + c.name() + " differs"};
    }
  }
  return {true, "criteria 1-2 over TCP: same solutions and deref counts"};
}

}  // namespace
}  // namespace ldq

int main() {
  using namespace ldq;
  using Clock = std::chrono::steady_clock;
  FiniteWeb bob = LoadFixture(ReadData("bob.fixture"));
  NumberWeb numbers;

  struct Item {
    int id;
    double limit_s;  // 0: no time bound
    std::function<Outcome()> run;
  };
  const Item items[] = {
      {1, 1, [&] { return Criterion1(bob); }},
      {2, 1, [&] { return Criterion2(numbers, false); }},
      {3, 5, Criterion3},
      {4, 60, Criterion4},
      {5, 120, Criterion5},
      {6, 0, Criterion6},
      {7, 0, Criterion7},
      {8, 0, Criterion8},
      {9, 0, [&] { return Criterion9(bob); }},
  };
  int failed = 0;
  for (const auto& item : items) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = item.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (o.pass && item.limit_s > 0 && secs >= item.limit_s) {
      o = {false, "too slow (limit " + std::to_string(item.limit_s) + " s)"};
    }
    failed += !o.pass;
    std::printf("AC%d %s %.3fs %s\n", item.id, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
