#include <gtest/gtest.h>

#include "regulab/errors.hpp"
#include "regulab/mappings.hpp"

using namespace regulab;

namespace {
Vec s(double a) { return Vec::Constant(1, a); }
}  // namespace

TEST(Eval, SquareDiffAndLinearDiffAndIdentity) {
  const auto sq = SetValuedMap::square_diff();
  const auto sq_val = sq.eval(s(0), s(0.5));
  EXPECT_TRUE(sq_val.contains(s(0.25), 1e-15));
  EXPECT_FALSE(sq_val.contains(s(0.26), 1e-9));
  EXPECT_TRUE(SetValuedMap::linear_diff(1).eval(s(1), s(1)).contains(s(0), 0));
  Vec x(2);
  x << 0.3, -4;
  EXPECT_TRUE(SetValuedMap::identity(2).eval(Vec::Zero(0), x).contains(x, 0));
}

TEST(Residual, MatchesClosedForms) {
  const auto sq = SetValuedMap::square_diff();
  const auto lin = SetValuedMap::linear_diff(1);
  EXPECT_NEAR(sq.residual(s(0), s(0.5), s(0)), 0.25, 1e-15);
  for (double p : {-0.8, 0.0, 0.35}) {
    for (double x : {-1.0, -0.2, 0.5, 0.9}) {
      EXPECT_NEAR(sq.residual(s(p), s(x), s(0)), (x - p) * (x - p), 1e-14);
      EXPECT_NEAR(lin.residual(s(p), s(x), s(0)), std::abs(x - p), 1e-14);
    }
  }
  EXPECT_EQ(lin.residual(s(0.3), s(0.3), s(0)), 0.0);
}

TEST(SolutionSet, BothExamplesSolveToP) {
  for (const auto& f : {SetValuedMap::square_diff(), SetValuedMap::linear_diff(1)}) {
    for (double p : {-0.5, 0.0, 0.7}) {
      const RegionSpec g = f.solution_set(s(p), s(0));
      EXPECT_TRUE(g.contains(s(p), 1e-12));
      EXPECT_FALSE(g.contains(s(p + 0.01), 1e-9));
      EXPECT_NEAR(f.dist_to_solutions(s(p), s(p + 0.3), s(0)).distance, 0.3, 1e-12);
    }
  }
}

TEST(SolutionSet, EmptySliceGivesInfiniteDistance) {
  // Graph {(x, y) : y >= x^+ ... } simplified: F(x) = [1, 2] for every x, ybar = 0.
  Mat a(2, 2);
  a << 0, 1, 0, -1;
  Vec b(2);
  b << 2, -1;
  const auto f = SetValuedMap::polyhedral(ParameterCarrier::singleton(), 1, 1, {{GraphPiece{a, b, Mat::Zero(2, 0)}}});
  const Vec p = Vec::Zero(0);
  EXPECT_TRUE(f.solution_set(p, s(0)).known_empty());
  EXPECT_EQ(f.dist_to_solutions(p, s(0.4), s(0)).distance, kInf);
  EXPECT_NEAR(f.residual(p, s(0.4), s(0)), 1.0, 1e-12);
}

TEST(Polyhedral, DimensionMismatchIsInputError) {
  Mat a(2, 3);
  a.setZero();
  EXPECT_THROW(
      SetValuedMap::polyhedral(ParameterCarrier::singleton(), 1, 1, {{GraphPiece{a, Vec::Zero(2), Mat::Zero(2, 0)}}}),
      InputError);
  Mat a2 = Mat::Zero(2, 2);
  EXPECT_THROW(
      SetValuedMap::polyhedral(ParameterCarrier::singleton(), 1, 1, {{GraphPiece{a2, Vec::Zero(3), Mat::Zero(2, 0)}}}),
      InputError);
}

TEST(Polyhedral, LabelCarrierSelectsPieces) {
  // Label 0: F(x) = {x}; label 1: F(x) = {-x}.
  Mat a0(2, 2), a1(2, 2);
  a0 << 1, -1, -1, 1;
  a1 << 1, 1, -1, -1;
  const auto f = SetValuedMap::polyhedral(ParameterCarrier::finite(2), 1, 1,
                                          {{GraphPiece{a0, Vec::Zero(2), Mat::Zero(2, 0)}},
                                           {GraphPiece{a1, Vec::Zero(2), Mat::Zero(2, 0)}}});
  EXPECT_NEAR(f.residual(s(0), s(0.5), s(0.5)), 0.0, 1e-12);
  EXPECT_NEAR(f.residual(s(1), s(0.5), s(0.5)), 1.0, 1e-12);
  EXPECT_THROW(f.residual(s(2), s(0.5), s(0.5)), InputError);
}

TEST(Affine, MatchesFormula) {
  Mat m(1, 2), n(1, 1);
  m << 2, -1;
  n << 3;
  const auto f = SetValuedMap::affine(m, n, s(0.5));
  Vec x(2);
  x << 0.25, 1;
  EXPECT_NEAR(f.residual(s(0.1), x, s(0)), std::abs(0.5 - 1 + 0.3 + 0.5), 1e-12);
  EXPECT_TRUE(f.graph_convex());
}

TEST(HatReduction, ParameterCarrierIsPTimesY) {
  const auto f = SetValuedMap::linear_diff(1);
  const auto h = f.hat_reduction();
  EXPECT_EQ(h.carrier().dim, 2);
  Vec pw(2);
  pw << 0.3, 0.1;
  // F_hat((p, w), x) = {p - x - w}
  EXPECT_NEAR(h.residual(pw, s(0.0), s(0)), 0.2, 1e-12);
  EXPECT_NEAR(h.dist_to_solutions(pw, s(0.0), s(0)).distance, 0.2, 1e-12);
}

TEST(Query, ValidationRejectsBadParameters) {
  const auto f = SetValuedMap::linear_diff(1);
  RegularityQuery q;
  q.xbar = s(0);
  q.ybar = s(0);
  q.pbar = s(0);
  EXPECT_NO_THROW(q.validate(f));
  q.tau = 1.0;
  EXPECT_THROW(q.validate(f), InputError);
  q.tau = 0.5;
  q.alpha = 0;
  EXPECT_THROW(q.validate(f), InputError);
  q.alpha = 1;
  q.xbar = Vec::Zero(2);
  EXPECT_THROW(q.validate(f), InputError);
}
