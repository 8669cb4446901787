#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ldq/errors.hpp"
#include "ldq/query.hpp"
#include "oracles.hpp"

namespace ldq {
namespace {

std::string ReadData(const std::string& name) {
  std::ifstream in(std::string(LDQ_TEST_DATA) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Identifier I(const char* s) { return Identifier(s); }
Variable V(const char* s) { return Variable(s); }

Valuation Val(std::initializer_list<std::pair<const char*, Term>> binds) {
  Valuation mu;
  for (const auto& [v, t] : binds) mu.Bind(Variable(v), t);
  return mu;
}

Bqp B1() { return Bqp{TriplePattern(I("no_2"), I("succ"), V("x"))}; }

TEST(Pattern, VarsAndIds) {
  TriplePattern tp(I("bob"), I("knows"), V("p"));
  EXPECT_EQ(VarsOf(tp), std::vector<Variable>{V("p")});
  EXPECT_EQ(IdsOfPattern(tp), (std::vector<Identifier>{I("bob"), I("knows")}));
  EXPECT_TRUE(VarsOf(TriplePattern(I("a"), I("b"), I("c"))).empty());
  Bqp b{TriplePattern(V("a"), V("b"), V("c")),
        TriplePattern(V("c"), I("p"), Literal("x"))};
  EXPECT_EQ(VarsOf(b), (std::vector<Variable>{V("a"), V("b"), V("c")}));
  EXPECT_EQ(IdsOfPattern(TriplePattern(V("x"), I("p"), Literal("lit"))),
            std::vector<Identifier>{I("p")});
  EXPECT_TRUE(IdsOfPattern(Bqp{}).empty());
}

TEST(Pattern, LiteralPositions) {
  EXPECT_THROW(TriplePattern(Literal("a"), I("p"), V("x")),
               IllegalLiteralPosition);
  EXPECT_THROW(TriplePattern(V("x"), Literal("p"), V("y")),
               IllegalLiteralPosition);
}

TEST(Bqp, DropsDuplicates) {
  TriplePattern tp(V("x"), I("p"), V("y"));
  EXPECT_EQ(Bqp({tp, tp}).size(), 1u);
}

TEST(Apply, Substitutes) {
  TriplePattern tp(I("bob"), I("knows"), V("p"));
  auto r = Apply(Val({{"p", I("alice")}}), tp);
  EXPECT_TRUE(r.is_ground());
  EXPECT_EQ(r.ToTriple(), (Triple{I("bob"), I("knows"), I("alice")}));
  EXPECT_EQ(Apply(Valuation{}, tp), tp);
  EXPECT_THROW(Apply(Val({{"s", Literal("lit")}}),
                     TriplePattern(V("s"), I("p"), I("o"))),
               IllegalLiteralPosition);
  EXPECT_FALSE(TryApply(Val({{"s", Literal("lit")}}),
                        TriplePattern(V("s"), I("p"), I("o"))));
}

TEST(Unify, Examples) {
  auto mu = Unify(Triple{I("bob"), I("knows"), I("alice")},
                  TriplePattern(I("bob"), I("knows"), V("p")));
  ASSERT_TRUE(mu);
  EXPECT_EQ(*mu, Val({{"p", I("alice")}}));
  EXPECT_FALSE(Unify(Triple{I("a"), I("p"), I("b")},
                     TriplePattern(V("x"), I("p"), V("x"))));
  auto same = Unify(Triple{I("a"), I("p"), I("a")},
                    TriplePattern(V("x"), I("p"), V("x")));
  ASSERT_TRUE(same);
  EXPECT_EQ(*same, Val({{"x", I("a")}}));
}

TEST(Unify, ConsistencyProperty) {
  // matches ⇔ unify succeeds ⇔ apply(unify) reproduces t.
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    SynthInstance inst = RandomInstance(i);
    auto data = AllData(inst.web);
    for (const auto& tp : inst.pattern.patterns()) {
      for (const Triple& t : data) {
        auto mu = Unify(t, tp);
        EXPECT_EQ(Matches(t, tp), mu.has_value());
        if (mu) {
          EXPECT_EQ(Apply(*mu, tp).ToTriple(), t);
          EXPECT_EQ(mu->Domain(), VarsOf(tp));
        }
      }
    }
    if (HasFailure()) break;
  }
}

TEST(Criteria, BuiltIns) {
  Bqp b{TriplePattern(I("bob"), I("knows"), V("p"))};
  Triple t{I("bob"), I("knows"), I("alice")};
  EXPECT_TRUE(ReachabilityCriterion::Match()(t, I("knows"), b));
  EXPECT_TRUE(ReachabilityCriterion::All()(t, I("knows"), b));
  EXPECT_FALSE(ReachabilityCriterion::None()(t, I("bob"), b));
  EXPECT_FALSE(ReachabilityCriterion::Match()(
      Triple{I("a"), I("q"), I("b")}, I("a"),
      Bqp{TriplePattern(V("x"), I("p"), V("y"))}));
  EXPECT_EQ(ReachabilityCriterion::FromName("match").name(), "match");
  EXPECT_THROW(ReachabilityCriterion::FromName("some"), InvalidValue);
}

TEST(ReachablePart, NumberWebExample) {
  NumberWeb w;
  auto match = ReachablePart(
      w, QuerySpec(B1(), {I("no_2")}, ReachabilityCriterion::Match()), 100);
  EXPECT_TRUE(match.complete);
  EXPECT_EQ(match.documents,
            (std::vector<DocumentId>{DocumentId("d_2"), DocumentId("d_3")}));
  auto none = ReachablePart(
      w, QuerySpec(B1(), {I("no_2")}, ReachabilityCriterion::None()),
      std::nullopt);
  EXPECT_TRUE(none.complete);
  EXPECT_EQ(none.documents, std::vector<DocumentId>{DocumentId("d_2")});
  EXPECT_EQ(none.derefs_used, 1u);
}

TEST(ReachablePart, BudgetRules) {
  NumberWeb w;
  QuerySpec all(B1(), {I("no_2")}, ReachabilityCriterion::All());
  EXPECT_THROW(ReachablePart(w, all, std::nullopt), BudgetRequired);
  auto r = ReachablePart(w, all, 10);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.derefs_used, 10u);
}

TEST(ReachablePart, EmptySeeds) {
  FiniteWeb w = LoadFixture(ReadData("bob.fixture"));
  auto r = ReachablePart(
      w, QuerySpec(ParseQuery(ReadData("fig1.q")), {}, ReachabilityCriterion::All()),
      std::nullopt);
  EXPECT_TRUE(r.documents.empty());
  EXPECT_TRUE(r.complete);
}

TEST(ReachablePart, AgreesWithFixpoint) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SynthInstance inst = RandomInstance(seed);
    for (auto c : {ReachabilityCriterion::All(), ReachabilityCriterion::Match(),
                   ReachabilityCriterion::None()}) {
      QuerySpec q = inst.Spec(c);
      auto r = ReachablePart(inst.web, q, std::nullopt);
      auto fix = testing::FixpointReachable(inst.web, q);
      ASSERT_EQ(std::set<DocumentId>(r.documents.begin(), r.documents.end()),
                fix)
          << "seed " << seed << " " << c.name();
      ASSERT_EQ(r.data, testing::DataOf(inst.web, fix));
      // Seeds' documents are always reached; None reaches exactly those.
      std::set<DocumentId> seed_docs;
      for (const auto& u : inst.seeds) {
        if (auto d = inst.web.Deref(u)) seed_docs.insert(d->id());
      }
      EXPECT_TRUE(std::includes(fix.begin(), fix.end(), seed_docs.begin(),
                                seed_docs.end()));
      if (c.kind() == ReachabilityCriterion::Kind::kNone) {
        EXPECT_EQ(fix, seed_docs);
      }
    }
  }
}

TEST(EvaluateBqp, AgreesWithBruteForce) {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    SynthParams p;
    p.max_documents = 4;
    p.max_triples_per_document = 3;
    p.extra_identifiers = 3;
    SynthInstance inst = RandomInstance(seed, p);
    auto data = AllData(inst.web);
    if (VarsOf(inst.pattern).size() > 4) continue;
    auto got = EvaluateBqp(inst.pattern, data);
    ASSERT_EQ(got, testing::BruteForceSolutions(inst.pattern, data))
        << "seed " << seed;
    ASSERT_EQ(got, testing::NestedLoopSolutions(inst.pattern, data));
    ++compared;
  }
  EXPECT_GT(compared, 200);
}

TEST(EvaluateBqp, EmptyPatternHasEmptySolution) {
  EXPECT_EQ(EvaluateBqp(Bqp{}, {}), std::vector<Valuation>{Valuation{}});
}

TEST(Oracle, Examples) {
  NumberWeb w;
  for (auto c : {ReachabilityCriterion::Match(), ReachabilityCriterion::None()}) {
    auto r = OracleEvaluate(w, QuerySpec(B1(), {I("no_2")}, c), 100);
    EXPECT_EQ(r.solutions, std::vector<Valuation>{Val({{"x", I("no_3")}})});
    EXPECT_TRUE(r.complete);
  }
  EXPECT_THROW(OracleEvaluate(w, QuerySpec(B1(), {I("no_2")},
                                           ReachabilityCriterion::Match()),
                              std::nullopt),
               BudgetRequired);
  EXPECT_TRUE(OracleEvaluate(w, QuerySpec(B1(), {I("no_2")},
                                          ReachabilityCriterion::None()),
                             std::nullopt)
                  .complete);
  FiniteWeb bob = LoadFixture(ReadData("bob.fixture"));
  auto r = OracleEvaluate(bob,
                          QuerySpec(ParseQuery(ReadData("fig1.q")),
                                    {I("http://bob.name")},
                                    ReachabilityCriterion::Match()),
                          std::nullopt);
  EXPECT_EQ(r.solutions,
            std::vector<Valuation>{Val({{"p", I("http://alice.name")},
                                        {"pr", I("http://x/AlicesPrj")},
                                        {"l", Literal("Alice's Project")}})});
}

TEST(Oracle, TruncatedNumberWebB2) {
  FiniteWeb w = Materialize(NumberWeb(12));
  QuerySpec q(ParseQuery(ReadData("b2.q")), {I("no_2")},
              ReachabilityCriterion::Match());
  auto got = OracleEvaluate(w, q, std::nullopt).solutions;
  auto data = AllData(InducedSubweb(w, [&] {
    auto docs = testing::FixpointReachable(w, q);
    return docs;
  }()));
  EXPECT_EQ(got, testing::BruteForceSolutions(q.pattern, data));
  std::set<Valuation> family;
  for (int i = 1; i <= 4; ++i) {
    family.insert(Val({{"x", I("no_3")},
                       {"y", I("no_4")},
                       {"z", NumberWeb::NumberId(3 * i)}}));
  }
  EXPECT_EQ(std::set<Valuation>(got.begin(), got.end()), family);
}

TEST(Oracle, SolutionsAreGroundInReachableData) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SynthInstance inst = RandomInstance(seed);
    QuerySpec q = inst.Spec(ReachabilityCriterion::Match());
    auto r = OracleEvaluate(inst.web, q, std::nullopt);
    std::set<Triple> data(r.reach.data.begin(), r.reach.data.end());
    for (const auto& mu : r.solutions) {
      EXPECT_EQ(mu.Domain(), VarsOf(q.pattern));
      for (const auto& tp : q.pattern.patterns()) {
        EXPECT_TRUE(data.contains(Apply(mu, tp).ToTriple()));
      }
    }
  }
}

TEST(QueryText, ParseAndWrite) {
  Bqp b = ParseQuery(ReadData("fig1.q"));
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], TriplePattern(I("http://bob.name"), I("knows"), V("p")));
  EXPECT_EQ(ParseQuery(WriteQuery(b)), b);
  EXPECT_EQ(ParseQuery("?x p \"a b\"\n")[0].object().term(),
            Term(Literal("a b")));
  EXPECT_THROW(ParseQuery("\"lit\" p ?x\n"), ParseError);
  EXPECT_THROW(ParseQuery("a b\n"), ParseError);
  EXPECT_THROW(ParseQuery("a b c d\n"), ParseError);
}

}  // namespace
}  // namespace ldq
