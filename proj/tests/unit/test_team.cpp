#include <gtest/gtest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace apdep;
using apdep::testing::three_rows;
using apdep::testing::squares;

TEST(Project, SquaresRow) {
  const auto t = squares();
  EXPECT_EQ(project(t.row(0), seq({"x", "y"})), (Tuple{2, 4}));
}

TEST(Project, EmptySequence) { EXPECT_TRUE(project(squares().row(2), {}).empty()); }

TEST(Project, DuplicatesRepeatValues) {
  MultiTeam m(seq({"x", "y"}));
  m.add({0, 1});
  EXPECT_EQ(project(m.row(0), seq({"y", "x", "y"})), (Tuple{1, 0, 1}));
}

TEST(Project, UnknownVariableIsNamed) {
  try {
    project(squares().row(0), seq({"w"}));
    FAIL() << "expected UnknownVariableError";
  } catch (const UnknownVariableError& e) {
    EXPECT_EQ(e.variable(), "w");
  }
}

TEST(Values, StringAndIntegerTokensDiffer) {
  EXPECT_NE(Value("4"), Value(4));
  EXPECT_EQ(Value(4), Value(std::int64_t{4}));
}

TEST(Domain, RejectsDuplicateNames) { EXPECT_THROW(make_domain(seq({"x", "x"})), std::invalid_argument); }

TEST(TeamModel, InsertingExistingRowIsNoOp) {
  Team t(seq({"x"}));
  EXPECT_TRUE(t.insert({1}));
  EXPECT_FALSE(t.insert({1}));
  EXPECT_EQ(t.size(), 1u);
}

TEST(RestrictTeam, CollapsesToTwoRows) {
  const auto z = restrict_team(three_rows(), to_set(seq({"x", "y"})));
  EXPECT_EQ(z.size(), 2u);
  EXPECT_TRUE(z.contains({0, 0}));
  EXPECT_TRUE(z.contains({0, 1}));
}

TEST(RestrictTeam, FullDomainIsIdentity) {
  const auto y = three_rows();
  EXPECT_EQ(restrict_team(y, y.domain().as_set()), y);
}

TEST(RestrictTeam, EmptyVariableSet) {
  std::mt19937 rng(7);
  Team t(seq({"a", "b"}));
  while (t.size() < 5) t.insert({static_cast<int>(rng() % 9), static_cast<int>(rng() % 9)});
  const auto r = restrict_team(t, {});
  EXPECT_EQ(r.size(), 1u);
  EXPECT_TRUE(r.rows()[0].empty());
  EXPECT_EQ(restrict_team(Team(seq({"a"})), {}).size(), 0u);
}

TEST(RestrictMultiTeam, KeepsThreeRows) {
  const auto m = restrict_multiteam(team_as_multiteam(three_rows()), to_set(seq({"x", "y"})));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.rows()[0], (Tuple{0, 0}));
  EXPECT_EQ(m.rows()[1], (Tuple{0, 0}));
  EXPECT_EQ(m.rows()[2], (Tuple{0, 1}));
}

TEST(RestrictMultiTeam, FullDomainIsIdentity) {
  const auto m = squares();
  EXPECT_EQ(restrict_multiteam(m, m.domain().as_set()), m);
}

TEST(RestrictMultiTeam, IdenticalRowsStay) {
  MultiTeam m(seq({"a", "b"}));
  for (int i = 0; i < 4; ++i) m.add({1, 2});
  EXPECT_EQ(restrict_multiteam(m, {Variable("a")}).size(), 4u);
  EXPECT_EQ(restrict_multiteam(m, {}).size(), 4u);
}

TEST(TeamAsMultiTeam, Examples) {
  EXPECT_EQ(team_as_multiteam(Team(seq({"x"}))).size(), 0u);
  EXPECT_EQ(team_as_multiteam(three_rows()).size(), 3u);
  Team t(seq({"x", "y", "z"}));
  const auto m = squares();
  for (const auto& r : m.rows()) t.insert(r);
  EXPECT_EQ(team_as_multiteam(t), m);
}

TEST(TeamProperties, RestrictionComposesAndShrinks) {
  std::mt19937 rng(11);
  const auto vars = apdep::testing::first_vars(4);
  for (int iter = 0; iter < 300; ++iter) {
    const auto m = apdep::testing::random_multiteam(rng, 0, 10, 4, 3);
    Team t(m.domain_ptr());
    for (const auto& r : m.rows()) t.insert(r);
    const unsigned w = rng() % 16;
    const unsigned v = w & static_cast<unsigned>(rng() % 16);
    const auto W = to_set(apdep::testing::subset(vars, w));
    const auto V = to_set(apdep::testing::subset(vars, v));
    EXPECT_EQ(restrict_team(restrict_team(t, W), V), restrict_team(t, V));
    EXPECT_EQ(restrict_multiteam(restrict_multiteam(m, W), V), restrict_multiteam(m, V));
    EXPECT_LE(restrict_team(t, V).size(), t.size());
    EXPECT_EQ(restrict_multiteam(m, V).size(), m.size());
  }
}

TEST(TeamProperties, ProjectionOfConcatenation) {
  std::mt19937 rng(12);
  const auto vars = apdep::testing::first_vars(4);
  for (int iter = 0; iter < 300; ++iter) {
    const auto m = apdep::testing::random_multiteam(rng, 1, 3, 4, 3);
    const auto x = apdep::testing::random_seq(rng, vars, 4);
    const auto y = apdep::testing::random_seq(rng, vars, 4);
    auto expected = project(m.row(0), x);
    const auto py = project(m.row(0), y);
    expected.insert(expected.end(), py.begin(), py.end());
    EXPECT_EQ(project(m.row(0), concat(x, y)), expected);
  }
}
