#include <gtest/gtest.h>

#include "regulab/errors.hpp"
#include "regulab/spaces.hpp"

using namespace regulab;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) { Vec v(2); v << a, b; return v; }
}  // namespace

TEST(ProdDist, CoincidentPointsAreAtDistanceZero) {
  for (double g : {0.1, 1.0, 7.0}) EXPECT_EQ(prod_dist(v2(1, 2), v1(3), v2(1, 2), v1(3), GammaMetric(g)), 0.0);
}

TEST(ProdDist, MaxOfWeightedComponents) {
  EXPECT_DOUBLE_EQ(prod_dist(v1(1), v1(2), v1(0), v1(0), GammaMetric(0.5)), 1.0);
  EXPECT_DOUBLE_EQ(prod_dist(v1(0), v1(1), v1(0), v1(0), GammaMetric(2.0)), 2.0);
}

TEST(ProdDist, DimensionMismatchIsInputError) {
  EXPECT_THROW(prod_dist(v1(0), v1(0), v2(0, 0), v1(0), GammaMetric(1)), InputError);
}

TEST(GammaMetric, RejectsNonPositiveGamma) {
  EXPECT_THROW(GammaMetric(0.0), InputError);
  EXPECT_THROW(GammaMetric(-1.0), InputError);
}

TEST(DualNorm, SumWithInverseGammaWeight) {
  EXPECT_EQ(dual_norm(v1(0), v1(0), GammaMetric(3)), 0.0);
  for (double g : {0.2, 1.0, 5.0}) EXPECT_DOUBLE_EQ(dual_norm(v2(0.6, 0.8), v1(0), GammaMetric(g)), 1.0);
  EXPECT_DOUBLE_EQ(dual_norm(v1(0), v1(1), GammaMetric(0.5)), 2.0);
}

TEST(DualNorm, IsDualToProdNorm) {
  // |<(xs,ys),(x,y)>| <= dual_norm * prod_norm on a handful of pairs.
  const GammaMetric g(0.7);
  for (int i = 0; i < 20; ++i) {
    const Vec xs = v2(std::sin(i), std::cos(3 * i)), x = v2(std::cos(i), std::sin(2 * i));
    const Vec ys = v1(std::sin(5 * i)), y = v1(std::cos(7 * i));
    EXPECT_LE(std::abs(xs.dot(x) + ys.dot(y)), dual_norm(xs, ys, g) * prod_norm(x, y, g) + 1e-12);
  }
}

TEST(MakeGrid, EndpointsAndSpacing) {
  auto g = make_grid(GridSpec(v1(0), v1(1), 2));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0][0], 0.0);
  EXPECT_EQ(g[1][0], 1.0);
  g = make_grid(GridSpec(v1(-1), v1(1), 3));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0][0], -1.0);
  EXPECT_EQ(g[1][0], 0.0);
  EXPECT_EQ(g[2][0], 1.0);
}

TEST(MakeGrid, ProductGridIsLexicographic) {
  const auto g = make_grid(GridSpec(v2(0, 0), v2(1, 1), 2));
  ASSERT_EQ(g.size(), 4u);
  const double expect[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(g[i][0], expect[i][0]);
    EXPECT_EQ(g[i][1], expect[i][1]);
  }
}

TEST(MakeGrid, PointCapIsResourceError) {
  GridSpec s(Vec::Zero(3), Vec::Ones(3), 100);
  try {
    make_grid(s, 1000);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.requested(), 1000000u);
  }
}

TEST(MakeGrid, InvalidSpecIsInputError) {
  EXPECT_THROW(make_grid(GridSpec(v1(1), v1(0), 3)), InputError);
  EXPECT_THROW(make_grid(GridSpec(v1(0), v1(1), 1)), InputError);
}

TEST(Extent, ClampReportsWhenUnbounded) {
  bool clamped = false;
  EXPECT_EQ(Extent(0.5).clamp(2.0, clamped), 0.5);
  EXPECT_FALSE(clamped);
  EXPECT_EQ(Extent::unbounded().clamp(2.0, clamped), 2.0);
  EXPECT_TRUE(clamped);
  EXPECT_THROW(Extent(0.0), InputError);
}
