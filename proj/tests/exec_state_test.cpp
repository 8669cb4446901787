#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ldq/errors.hpp"
#include "ldq/exec_state.hpp"
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

class BobState : public ::testing::Test {
 protected:
  FiniteWeb web = LoadFixture(ReadData("bob.fixture"));
  Bqp b = ParseQuery(ReadData("fig1.q"));
};

TEST(PartialSolution, Empty) {
  PartialSolution s0 = EmptyPartial();
  EXPECT_EQ(s0.covered, 0u);
  EXPECT_EQ(s0.valuation.size(), 0u);
  EXPECT_EQ(s0, EmptyPartial());
  EXPECT_EQ(s0.ToString(), "[]");
}

TEST_F(BobState, InitialDiscovered) {
  DiscoveredPart d = InitialDiscovered(web, std::vector<Identifier>{I("http://bob.name")});
  EXPECT_EQ(d.DocumentIds(), std::vector<DocumentId>{DocumentId("doc_bob")});
  EXPECT_TRUE(InitialDiscovered(web, std::vector<Identifier>{}).documents().empty());
  DiscoveredPart miss = InitialDiscovered(web, std::vector<Identifier>{I("unknown")});
  EXPECT_TRUE(miss.documents().empty());
  ASSERT_EQ(miss.deref_log().size(), 1u);
  EXPECT_FALSE(miss.deref_log().at(I("unknown")).has_value());
}

TEST_F(BobState, AugmentationExamples) {
  DiscoveredPart d = InitialDiscovered(web, std::vector<Identifier>{I("http://bob.name")});
  Triple knows{I("http://bob.name"), I("knows"), I("http://alice.name")};
  PartialSolution s1 = Augment(EmptyPartial(), knows, 0, b, d);
  EXPECT_EQ(s1.covered, 1u);
  EXPECT_EQ(s1.valuation, Val({{"p", I("http://alice.name")}}));

  MuExpandInPlace(d, s1.valuation, web);
  Triple project{I("http://alice.name"), I("currentProject"),
                 I("http://x/AlicesPrj")};
  PartialSolution s2 = Augment(s1, project, 1, b, d);
  EXPECT_EQ(s2.covered, 3u);
  EXPECT_EQ(s2.valuation, Val({{"p", I("http://alice.name")},
                               {"pr", I("http://x/AlicesPrj")}}));

  // Conflict on ?p, covered pattern, undiscovered triple, no match.
  FiniteWeb carol = LoadFixture(
      "doc c\nuri carol\nt carol currentProject x\n");
  DiscoveredPart dc = InitialDiscovered(carol, std::vector<Identifier>{I("carol")});
  EXPECT_THROW(Augment(s1, Triple{I("carol"), I("currentProject"), I("x")}, 1,
                       b, dc),
               NotApplicable);
  EXPECT_FALSE(TryAugment(s1, knows, 0, b, d));
  EXPECT_FALSE(TryAugment(EmptyPartial(),
                          Triple{I("a"), I("b"), I("c")}, 0, b, d));
  EXPECT_FALSE(TryAugment(EmptyPartial(), project, 0, b, d));
}

TEST_F(BobState, MuExpansion) {
  DiscoveredPart d = InitialDiscovered(web, std::vector<Identifier>{I("http://bob.name")});
  DiscoveredPart e = MuExpand(d, Val({{"p", I("http://alice.name")}}), web);
  EXPECT_TRUE(e.ContainsDocument(DocumentId("doc_alice")));
  EXPECT_EQ(e.documents().size(), 2u);

  DiscoveredPart lit = MuExpand(d, Val({{"l", Literal("Alice")}}), web);
  EXPECT_EQ(lit.DocumentIds(), d.DocumentIds());
  EXPECT_EQ(lit.deref_count(), d.deref_count());

  DiscoveredPart again = MuExpand(e, Val({{"p", I("http://alice.name")}}), web);
  EXPECT_EQ(again.DocumentIds(), e.DocumentIds());
  EXPECT_EQ(again.deref_count(), e.deref_count());
}

TEST_F(BobState, OneTaskAfterInitialization) {
  ExecutionState s(b, InitialDiscovered(web, std::vector<Identifier>{I("http://bob.name")}));
  s.AddPartial(EmptyPartial());
  auto brute = testing::BruteForceOpenTasks(s);
  ASSERT_EQ(brute.size(), 1u);
  EXPECT_EQ(brute[0], (AeTask{0, 0, 0}));
  EXPECT_EQ(s.EnqueueDelta(0, 0), 1u);
  ASSERT_EQ(s.open_queue().size(), 1u);
  EXPECT_EQ(s.open_queue().front(), brute[0]);
  EXPECT_TRUE(s.IsAeTask(brute[0]));
  EXPECT_TRUE(s.IsOpen(brute[0]));
}

TEST_F(BobState, NoTasksWithoutMatches) {
  Bqp other{TriplePattern(V("x"), I("unused"), V("y"))};
  ExecutionState s(other, InitialDiscovered(web, std::vector<Identifier>{I("http://bob.name")}));
  s.AddPartial(EmptyPartial());
  EXPECT_EQ(s.EnqueueDelta(0, 0), 0u);
  EXPECT_TRUE(testing::BruteForceOpenTasks(s).empty());
}

TEST_F(BobState, ProducedAugmentationIsNotOpen) {
  ExecutionState s(b, InitialDiscovered(web, std::vector<Identifier>{I("http://bob.name")}));
  s.AddPartial(EmptyPartial());
  s.EnqueueDelta(0, 0);
  AeTask task = s.open_queue().front();
  auto aug = s.AugmentationOf(task);
  ASSERT_TRUE(aug);
  s.AddPartial(*aug);
  EXPECT_TRUE(s.IsAeTask(task));
  EXPECT_FALSE(s.IsOpen(task));
}

// Drives an execution by hand and checks after every step that the open
// tasks in the queue are exactly the brute-force open tasks.
TEST(ExecutionState, DeltaQueueMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    SynthInstance inst = RandomInstance(seed);
    ExecutionState s(inst.pattern, InitialDiscovered(inst.web, inst.seeds));
    s.AddPartial(EmptyPartial());
    s.EnqueueDelta(0, 0);
    for (int step = 0; step < 60; ++step) {
      std::set<std::tuple<std::size_t, std::size_t, std::size_t>> queued, brute;
      for (const AeTask& t : s.open_queue()) {
        ASSERT_TRUE(s.IsAeTask(t)) << "seed " << seed;
        if (s.IsOpen(t)) queued.emplace(t.partial, t.triple, t.pattern);
      }
      for (const AeTask& t : testing::BruteForceOpenTasks(s)) {
        brute.emplace(t.partial, t.triple, t.pattern);
      }
      ASSERT_EQ(queued, brute) << "seed " << seed << " step " << step;

      auto& q = s.open_queue();
      while (!q.empty() && !s.IsOpen(q.front())) q.pop_front();
      if (q.empty()) break;
      AeTask task = q.front();
      q.pop_front();
      PartialSolution aug = *s.AugmentationOf(task);
      bool inserted = false;
      std::size_t index = s.AddPartial(aug, &inserted);
      std::size_t first_new = s.discovered().triples().size();
      MuExpandInPlace(s.discovered(), aug.valuation, inst.web);
      s.EnqueueDelta(inserted ? std::optional<std::size_t>(index) : std::nullopt,
                     first_new);
    }
  }
}

TEST(Properties, ExpansionMonotone) {
  EXPECT_EQ(testing::RunCases(0, 300, testing::CheckExpansionMonotone), "");
}

TEST(Properties, ExpansionClosed) {
  EXPECT_EQ(testing::RunCases(0, 300, testing::CheckExpansionClosed), "");
}

TEST(Properties, MatchBoundedness) {
  EXPECT_EQ(testing::RunCases(0, 150, testing::CheckMatchBoundedness), "");
}

TEST(Properties, AugmentationSound) {
  EXPECT_EQ(testing::RunCases(0, 150, testing::CheckAugmentationSound), "");
}

TEST(Properties, CriterionMonotone) {
  EXPECT_EQ(testing::RunCases(0, 200, testing::CheckCriterionMonotone), "");
}

}  // namespace
}  // namespace ldq
