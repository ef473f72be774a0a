#pragma once

#include "regulab/sets.hpp"

namespace regulab {

/// Nearest point of a cone K in X x Y under the weighted norm
/// wx |x*| + wy |y*|, found by enumerating the faces of K.
struct WeightedConeDistance {
  double value = kInf;
  Vec kx;
  Vec ky;
};

/// min over k in K of wx |a - k_x| + wy |b - k_y|. `a.size()` fixes the split
/// of K's coordinates into X and Y parts. An empty cone gives +inf.
WeightedConeDistance weighted_cone_distance(const Vec& a, const Vec& b, const ConeRep& k, double wx, double wy);

/// Distance from (xs, ys) to K in the dual product norm |x*| + |y*| / gamma.
double dual_cone_distance(const Vec& xs, const Vec& ys, const ConeRep& k, double gamma);

struct CoderivativeBallDistance {
  /// inf { |k_x| : k in K, |k_y + y*| < eta }; +inf when no such k exists.
  double value = kInf;
  /// The ball around y* misses the coderivative domain entirely.
  bool vacuous = false;
  /// min over K of |k_y + y*|.
  double gap = kInf;
  /// Lagrange multiplier of the ball constraint at the optimum.
  double multiplier = 0.0;
};

/// Infimum of |x*| over x* in D*(y*') with y*' in the open eta-ball around
/// y*, where D*(v*) = {x* : (x*, -v*) in K}. Solved through the concave dual
/// c -> dist_{1,c}((0, -y*), K) - c eta.
CoderivativeBallDistance coderivative_ball_distance(const ConeRep& k, int xdim, const Vec& ystar, double eta);

struct TangentDirection {
  Vec dx;
  Vec dy;
  /// <c_y, dy> at the returned direction.
  double value = 0.0;
};

/// Maximizes <c_y, dy> over d = (dx, dy) with H d <= 0, |dx| <= 1 and
/// |dy| <= 1 / gamma, using a log-barrier path on the relative interior of
/// the cone (implicit equalities are eliminated first).
TangentDirection best_tangent_direction(const Mat& h, int xdim, const Vec& cy, double gamma);

/// Same problem with the cone given directly in generator form.
TangentDirection best_tangent_direction(const ConeRep& t, int xdim, const Vec& cy, double gamma);

}  // namespace regulab
