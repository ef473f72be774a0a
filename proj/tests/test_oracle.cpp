#include <gtest/gtest.h>

#include "regulab/oracle.hpp"

using namespace regulab;

namespace {
Vec s(double a) { return Vec::Constant(1, a); }

RegularityQuery query(double alpha, double delta = 0.5, double mu = 0.5) {
  RegularityQuery q;
  q.xbar = s(0);
  q.ybar = s(0);
  q.pbar = s(0);
  q.alpha = alpha;
  q.delta = Extent(delta);
  q.mu = Extent(mu);
  q.eta = Extent(0.5);
  return q;
}

ScanGrids grids(int xres = 201, int pres = 21) {
  ScanGrids g;
  g.x = GridSpec(s(-1), s(1), xres);
  g.p = GridSpec(s(-1), s(1), pres);
  return g;
}
}  // namespace

TEST(Oracle, LinearDiffHoldsForEveryAlphaUpToOne) {
  const auto f = SetValuedMap::linear_diff(1);
  for (double a : {0.1, 0.5, 0.9, 1.0}) {
    const Certificate c = check_subreg_uniform(f, query(a), grids());
    EXPECT_TRUE(c.holds()) << a;
    EXPECT_GE(c.margin, -1e-12);
  }
  EXPECT_TRUE(check_subreg_uniform(f, query(1.05), grids()).violated());
}

TEST(Oracle, SquareDiffIsViolatedWithWitnessNearOrigin) {
  const auto f = SetValuedMap::square_diff();
  for (double a : {0.1, 0.5, 1.0}) {
    const RegularityQuery q = query(a);
    const Certificate c = check_subreg_uniform(f, q, grids());
    ASSERT_TRUE(c.violated());
    ASSERT_TRUE(c.witness);
    const Witness& w = *c.witness;
    // Re-derive the ratio from the closed form (x - p)^2 / |x - p|.
    const double d = std::abs(w.x[0] - w.p[0]);
    EXPECT_GT(d, 0);
    EXPECT_LT(d * d / d, a);
    EXPECT_LT(std::abs(w.x[0]), 0.2);
    EXPECT_TRUE(recheck_witness(f, q, c));
  }
}

TEST(Oracle, EmptyScanIsInconclusive) {
  // Every residual is at least 4, above alpha * mu.
  const auto f = SetValuedMap::affine(Mat::Identity(1, 1), Mat::Zero(1, 0), s(5));
  RegularityQuery q = query(1);
  q.pbar = Vec::Zero(0);
  ScanGrids g;
  g.x = GridSpec(s(-1), s(1), 11);
  const Certificate c = check_subreg_uniform(f, q, g);
  EXPECT_EQ(c.verdict, Verdict::Inconclusive);
}

TEST(Geometric, AgreesWithOracleOnBothExamples) {
  for (const auto& f : {SetValuedMap::linear_diff(1), SetValuedMap::square_diff()}) {
    for (double a : {0.1, 0.5, 1.0}) {
      EXPECT_EQ(check_geometric(f, query(a), grids()).verdict, check_subreg_uniform(f, query(a), grids()).verdict);
    }
  }
}

TEST(Modulus, LinearDiffIsOne) {
  const ModulusEstimate m = estimate_modulus(SetValuedMap::linear_diff(1), query(1), grids());
  EXPECT_NEAR(m.value, 1.0, 0.01);
  EXPECT_FALSE(m.vacuous);
}

TEST(Modulus, ScaledTwoIsTwoByBruteForce) {
  const auto f = SetValuedMap::scaled(1, 2.0);
  RegularityQuery q = query(1);
  q.pbar = Vec::Zero(0);
  ScanGrids g;
  g.x = GridSpec(s(-1), s(1), 101);
  const ModulusEstimate m = estimate_modulus(f, q, g);
  double brute = kInf;
  for (const auto& x : make_grid(g.x)) {
    if (std::abs(x[0]) < 0.5 && x[0] != 0 && std::abs(2 * x[0]) < 0.5) brute = std::min(brute, std::abs(2 * x[0]) / std::abs(x[0]));
  }
  EXPECT_NEAR(m.value, brute, 1e-12);
  EXPECT_NEAR(m.value, 2.0, 1e-12);
}

TEST(Modulus, SquareDiffShrinksWithDelta) {
  const auto f = SetValuedMap::square_diff();
  double prev = kInf;
  for (double d : {0.8, 0.4, 0.2, 0.1}) {
    RegularityQuery q = query(1, d, d);
    q.eta = Extent(d);
    const double m = estimate_modulus(f, q, grids(401, 41)).value;
    EXPECT_LE(m, prev + 1e-12);
    prev = m;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(Modulus, EmptyScanIsVacuousInfinity) {
  const auto f = SetValuedMap::scaled(1, 0.0);
  RegularityQuery q = query(1);
  q.pbar = Vec::Zero(0);
  ScanGrids g;
  g.x = GridSpec(s(-1), s(1), 11);
  const ModulusEstimate m = estimate_modulus(f, q, g);
  EXPECT_TRUE(m.vacuous);
  EXPECT_EQ(m.value, kInf);
}
