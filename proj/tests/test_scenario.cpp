#include <gtest/gtest.h>

#include "regulab/errors.hpp"
#include "regulab/report.hpp"
#include "regulab/scenario.hpp"

using namespace regulab;

namespace {
std::string minimal(const std::string& mapping, const std::string& checks, const std::string& extra_query = "") {
  return R"({"mapping": )" + mapping + R"(, "query": {"xbar": [0], "pbar": [0])" + extra_query +
         R"(}, "grids": {"x": {"lower": [-1], "upper": [1], "resolution": 21}}, "checks": )" + checks + "}";
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST(LoadScenario, ExampleBLoadsWithDefaults) {
  const Scenario s = parse_scenario(example_b_json());
  EXPECT_EQ(s.query.alpha, 1.0);
  EXPECT_EQ(s.query.gamma, 1.0);
  EXPECT_TRUE(s.cross_validate);
  EXPECT_NE(s.echo.find("\"tau\": 0.99"), std::string::npos);
  const Scenario m = parse_scenario(minimal(R"({"kind": "rule", "rule": "linear_diff"})", R"(["oracle"])"));
  EXPECT_EQ(m.query.alpha, 1.0);
  EXPECT_EQ(m.query.gamma, 1.0);
  EXPECT_EQ(m.query.ybar, Vec::Zero(1));
}

TEST(LoadScenario, UnknownCheckNamesTheField) {
  const std::string e = error_of(minimal(R"({"kind": "rule", "rule": "linear_diff"})", R"(["oracle", "T9"])"));
  EXPECT_NE(e.find("checks[1]"), std::string::npos) << e;
  EXPECT_NE(e.find("T9"), std::string::npos) << e;
}

TEST(LoadScenario, UnknownKeyNamesTheDottedPath) {
  const std::string e = error_of(minimal(R"({"kind": "rule", "rule": "linear_diff"})", R"(["oracle"])", R"(, "alpah": 2)"));
  EXPECT_NE(e.find("query.alpah"), std::string::npos) << e;
}

TEST(LoadScenario, PolyhedralDimensionMismatch) {
  const std::string bad_b = R"({"kind": "polyhedral", "parameter": {"normed": 1}, "x_dim": 1, "y_dim": 1,
      "pieces": [{"A": [[1, 1], [-1, -1]], "b": [0, 0, 0], "B": [[1], [-1]]}]})";
  EXPECT_NE(error_of(minimal(bad_b, R"(["oracle"])")).find("mapping.pieces[0].b"), std::string::npos);
  const std::string bad_a = R"({"kind": "polyhedral", "parameter": {"normed": 1}, "x_dim": 1, "y_dim": 1,
      "pieces": [{"A": [[1, 1, 0]], "b": [0]}]})";
  EXPECT_NE(error_of(minimal(bad_a, R"(["oracle"])")).find("mapping.pieces[0].A"), std::string::npos);
}

TEST(LoadScenario, MissingPerCheckFields) {
  const std::string m = R"({"kind": "rule", "rule": "linear_diff"})";
  EXPECT_NE(error_of(minimal(m, R"(["C33"])")).find("eta"), std::string::npos);
  EXPECT_NE(error_of(minimal(m, R"(["recede"])")).find(".l"), std::string::npos);
  EXPECT_NE(error_of(minimal(m, R"(["evp"])")).find("start"), std::string::npos);
  EXPECT_NE(error_of(minimal(m, R"([{"check": "T2", "mode": "maybe"}])")).find("mode"), std::string::npos);
  EXPECT_EQ(error_of(minimal(m, R"([{"check": "prop58", "l": 1, "l_prime": 1}])")), "");
}

TEST(LoadScenario, SyntaxErrorReportsLine) {
  const std::string e = error_of("{\n  \"mapping\": {\n    \"kind\": ,\n  }\n}");
  EXPECT_NE(e.find("line 3"), std::string::npos) << e;
}

TEST(LoadScenario, SampledGraphsAreRejected) {
  EXPECT_NE(error_of(minimal(R"({"kind": "sampled", "file": "g.csv"})", R"(["oracle"])")).find("not supported"),
            std::string::npos);
}

TEST(LoadScenario, MissingFileIsInputError) { EXPECT_THROW(load_scenario("/nonexistent/x.json"), InputError); }

TEST(RunScenario, ExampleAVerdictsAndWitness) {
  const Scenario s = parse_scenario(example_a_json());
  const RunResult r = run_scenario(s);
  EXPECT_TRUE(r.all_expected);
  EXPECT_TRUE(r.conflicts.empty());
  ASSERT_EQ(r.outcomes.front().label, "oracle");
  const auto& w = *r.outcomes.front().cert.witness;
  EXPECT_LT(std::abs(w.x[0]), 0.2);
  bool saw_t2 = false;
  for (const auto& o : r.outcomes) {
    if (o.label == "T2") {
      saw_t2 = true;
      EXPECT_TRUE(o.cert.violated());
    }
  }
  EXPECT_TRUE(saw_t2);
}

TEST(RunScenario, ExampleBAllHold) {
  const RunResult r = run_scenario(parse_scenario(example_b_json()));
  EXPECT_TRUE(r.all_expected);
  for (const auto& o : r.outcomes) EXPECT_TRUE(o.cert.holds()) << o.label;
}

TEST(RunScenario, MismatchedExpectationIsReported) {
  const Scenario s = parse_scenario(
      minimal(R"({"kind": "rule", "rule": "square_diff"})", R"([{"check": "oracle", "expect": "HOLDS"}])"));
  EXPECT_FALSE(run_scenario(s).all_expected);
}

TEST(RunScenario, ResourceCapCarriesPointCount) {
  Scenario s = parse_scenario(minimal(R"({"kind": "rule", "rule": "linear_diff"})", R"(["oracle"])"));
  s.grids.max_points = 10;
  try {
    run_scenario(s);
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.requested(), 21u);
  }
}

TEST(Csv, HeaderAndDeterminism) {
  const Scenario s = parse_scenario(example_b_json());
  const std::string a = to_csv(run_scenario(s)), b = to_csv(run_scenario(s));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), kCsvHeader);
  EXPECT_EQ(format_number(kInf), "inf");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
}
