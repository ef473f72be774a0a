#pragma once

#include "regulab/scan.hpp"

namespace regulab {

/// Brute-force check of alpha d(x, G(p)) <= d(ybar, F(p, x)) over scanned
/// p and x in B_delta(xbar) with d(ybar, F(p, x)) < alpha mu. The witness is
/// the violating point with the smallest ratio residual / distance (its value),
/// with near-ties going to the point closest to xbar.
Certificate check_subreg_uniform(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids);

/// Ball form: G(p) meets B_rho(x) for every rho in ]0, mu[ with residual
/// < alpha rho. The witness is the violating point with the smallest
/// residual / rho; its value is the radius rho of the empty ball.
Certificate check_geometric(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids);

struct ModulusEstimate {
  /// Largest alpha for which the scanned inequality holds (with the
  /// residual filter < alpha mu applied at that alpha); +inf if vacuous.
  double value = kInf;
  bool vacuous = true;
  std::size_t scanned = 0;
  std::optional<Witness> argmin;
  ScanMeta meta;
};

/// Every scanned point i with x_i outside G(p_i) forbids exactly the alphas
/// above max(r_i / d_i, r_i / mu), so the supremum of admissible alpha is
/// the minimum of that quantity over the scan. `q.alpha` is ignored.
ModulusEstimate estimate_modulus(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids);

/// Re-evaluates the defining inequality at a VIOLATED witness of
/// check_subreg_uniform and reports whether the violation reproduces.
bool recheck_witness(const SetValuedMap& f, const RegularityQuery& q, const Certificate& cert, double tol = 1e-9);

}  // namespace regulab
