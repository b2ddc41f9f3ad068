#include <gtest/gtest.h>

#include <sstream>

#include "../support/fixtures.hpp"
#include "apdep/io.hpp"

using namespace apdep;
using namespace apdep::testing;

namespace {

LoadedTeam load(const std::string& text, Semantics s = Semantics::Bag, const std::set<std::string>& ints = {}) {
  std::istringstream in(text);
  return load_team_csv(in, s, ints);
}

std::size_t error_line(const std::string& text) {
  try {
    load(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Csv, QuotedFields) {
  std::istringstream in("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n  plain  , \"  kept  \"\n\"two\nlines\",z\n");
  const auto recs = read_csv_records(in);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[1].fields, (std::vector<std::string>{"x, y", "say \"hi\""}));
  EXPECT_EQ(recs[2].fields, (std::vector<std::string>{"plain", "  kept  "}));
  EXPECT_EQ(recs[3].fields, (std::vector<std::string>{"two\nlines", "z"}));
  EXPECT_EQ(recs[3].line, 4u);
}

TEST(Csv, BlankLinesAndCrlf) {
  const auto t = load("x,y\r\n\r\n1,2\r\n\n3,4\r\n");
  ASSERT_EQ(t.team.size(), 2u);
  EXPECT_EQ(t.team.rows()[1], (Tuple{"3", "4"}));
  EXPECT_EQ(t.source_rows, (std::vector<std::size_t>{1, 2}));
}

TEST(Csv, Errors) {
  EXPECT_EQ(error_line(""), 1u);
  EXPECT_EQ(error_line("x,y\n1,2\n3\n"), 3u);
  EXPECT_EQ(error_line("x,y\n1,\"open\n"), 2u);
  EXPECT_EQ(error_line("x,x\n"), 1u);
  EXPECT_EQ(error_line("x,\n"), 1u);
  EXPECT_EQ(error_line("x,y\n\"a\"b,c\n"), 2u);
}

TEST(Csv, IntegerColumns) {
  const auto t = load("x,y\n2,4\n", Semantics::Bag, {"x"});
  EXPECT_EQ(t.team.rows()[0][0], Value(2));
  EXPECT_EQ(t.team.rows()[0][1], Value("4"));
  try {
    load("x,y\n2,4\nz,5\n", Semantics::Bag, {"x"});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Csv, SetSemanticsDropsDuplicates) {
  const auto bag = load("x,y\n0,0\n0,0\n0,1\n");
  EXPECT_EQ(bag.team.size(), 3u);
  EXPECT_EQ(bag.dropped_duplicates, 0u);
  const auto set = load("x,y\n0,0\n0,0\n0,1\n", Semantics::Set);
  EXPECT_EQ(set.team.size(), 2u);
  EXPECT_EQ(set.dropped_duplicates, 1u);
  EXPECT_EQ(set.source_rows, (std::vector<std::size_t>{1, 3}));
}

TEST(Csv, HeaderOnlyIsEmptyTeam) {
  const auto t = load("a,b\n");
  EXPECT_EQ(t.team.size(), 0u);
  EXPECT_EQ(t.team.domain().size(), 2u);
}

TEST(Csv, WriteRoundTrip) {
  MultiTeam m(seq({"a", "b c"}));
  m.add({"1, 2", "q\"uote"});
  m.add({" pad", "x"});
  std::ostringstream out;
  write_team_csv(out, m);
  EXPECT_EQ(load(out.str()).team, m);
}

TEST(Json, TeamRoundTrip) {
  const auto j = team_to_json(salaries());
  EXPECT_EQ(j.dump(), team_to_json(team_from_json(j)).dump());
  EXPECT_EQ(team_from_json(j), salaries());
  EXPECT_EQ(j["domain"][0], "Employee");
  EXPECT_EQ(j["rows"][5][2], 130000);
  EXPECT_THROW(team_from_json(json::parse(R"({"domain":["a"],"rows":[[1.5]]})")), std::invalid_argument);
}

TEST(Json, ProofRoundTrip) {
  SigmaSet sigma{parse_atom("dep[1/4](x ; y)"), parse_atom("dep[1/2](y ; z)")};
  const auto d = derives(sigma, parse_atom("dep[3/4](x ; z)"));
  ASSERT_TRUE(d.has_value());
  const auto j = derivation_to_json(*d);
  EXPECT_EQ(j["steps"][0]["id"], 1);
  const auto back = derivation_from_json(j);
  EXPECT_TRUE(check_derivation(back, sigma).valid);
  EXPECT_EQ(derivation_to_json(back).dump(), j.dump());
}

TEST(Json, ProofReaderRejectsUnknownRules) {
  const auto j = json::parse(R"j({"steps":[{"id":1,"rule":"A9","atom":"dep[1](x ; y)"}]})j");
  EXPECT_THROW(derivation_from_json(j), std::invalid_argument);
}

TEST(Json, RotationKeepsSideAndSplit) {
  Derivation d{{Step{1, Rule::A2, {}, parse_atom("dep[1](a b ; c)"), {}, 0},
                Step{2, Rule::A5, {1}, parse_atom("dep[1](b a ; c)"), Side::Lhs, 1}}};
  const auto j = derivation_to_json(d);
  EXPECT_EQ(j["steps"][1]["side"], "lhs");
  EXPECT_EQ(j["steps"][1]["split"], 1);
  EXPECT_TRUE(check_derivation(derivation_from_json(j), {}).valid);
}

TEST(Json, MiningOutput) {
  const auto rs = mine(salaries(), 1, ErrorRate(1, 6));
  const auto j = mining_to_json(rs);
  ASSERT_FALSE(j["results"].empty());
  EXPECT_TRUE(j["results"][0]["lhs"].is_array());
  std::ostringstream csv;
  write_mining_csv(csv, rs);
  EXPECT_NE(csv.str().find("Department,Salary,1,1/6"), std::string::npos);
}
