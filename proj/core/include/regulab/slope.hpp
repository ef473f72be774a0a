#pragma once

#include "regulab/scan.hpp"

namespace regulab {

/// psi_p(u, v) = |v - ybar| on gph F_p, +inf elsewhere.
double psi(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& u, const Vec& v);

/// Graph points approaching (x, y) along the best first-order descent
/// direction of each graph piece, at radii r_k = r0 2^-k, k = 0..levels-1.
struct SlopeSchedule {
  /// r0 = r0_rel * min(1, |y - ybar|), further capped so that probes stay
  /// inside their graph piece.
  double r0_rel = 1e-3;
  int levels = 13;
  /// The reported value is the maximum over the last `stable` levels.
  int stable = 3;
};

struct LocalSlope {
  double value = 0.0;
  std::vector<double> level_values;
  std::vector<double> radii;
};

/// Difference-quotient estimate of the gamma-slope limsup at (x, y).
/// Throws InputError if (x, y) is not a graph point.
LocalSlope local_slope(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& x, const Vec& y,
                       double gamma, const SlopeSchedule& schedule = {});

/// Supremum of (|y - ybar| - |v - ybar|) / d_gamma((u, v), (x, y)) over
/// graph candidates (u, v) != (x, y) with |u - xbar| < delta + mu and
/// |v - ybar| < alpha mu. Candidates: all sampled graph points of the grid,
/// the nearest solution (proj_{G(p)}(x), ybar), and the local probes.
/// Returns 0 when no candidate remains.
double nonlocal_slope(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& x, const Vec& y,
                      const ScanGrids& grids, double gamma);

/// Nonlocal slope >= alpha at every outer point (x not in G(p),
/// y in F(p, x) with |y - ybar| < alpha mu). Necessity mode uses
/// gamma = 1/alpha and the region B_delta(xbar).
Certificate check_theorem_P1(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                             const CheckOptions& opt = {});

/// Same contract with the local slope. Necessity mode requires every
/// gph F_p to be a single convex polyhedron (InputError otherwise).
Certificate check_corollary_C22(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                                const CheckOptions& opt = {});

namespace detail {

struct Probe {
  Vec u;
  Vec v;
  int level = 0;
};

std::vector<Probe> local_probes(const SetValuedMap& f, const Vec& p, const Vec& x, const Vec& y, const Vec& ybar,
                                double gamma, const SlopeSchedule& schedule);

double quotient(const Vec& u, const Vec& v, const Vec& x, const Vec& y, const Vec& ybar, double gamma);

}  // namespace detail
}  // namespace regulab
