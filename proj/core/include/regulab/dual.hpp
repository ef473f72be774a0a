#pragma once

#include <optional>
#include <vector>

#include "regulab/convex.hpp"
#include "regulab/scan.hpp"

namespace regulab {

/// Sum-rule representation {0} x d|. - ybar|(y) + N_{gph F_p}(x, y).
struct PsiSubdifferential {
  int xdim = 0;
  NormSubdifferential norm_part;
  ConeRep normal;

  /// d_gamma(0, d psi_p(x, y)) in the dual norm |x*| + |y*| / gamma.
  double distance(double gamma) const;
};

/// Requires gph F_p to be a single convex polyhedron (InputError otherwise)
/// and (x, y) to be a graph point.
PsiSubdifferential subdiff_psi(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& x,
                               const Vec& y);

/// Normal cone used by a dual check.
///  - Clarke: the convex-analysis cone on single convex polyhedral graphs,
///    and the normal space on C^1 closed-form graphs (where Clarke and
///    Frechet cones coincide).
///  - Frechet: Frechet cones of polyhedral unions or closed-form graphs.
enum class ConeKind { Clarke, Frechet };

/// Subdifferential condition d_gamma(0, d psi_p(x, y)) >= alpha. The
/// Clarke branch requires single convex polyhedral graphs. `c7_epsilon`
/// (default alpha * gamma) drives a flag raised wherever some subgradient
/// has |y*| < epsilon and |x*| < alpha.
Certificate check_P5(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                     const CheckOptions& opt = {}, ConeKind kind = ConeKind::Clarke,
                     std::optional<double> c7_epsilon = std::nullopt);

enum class T2Variant { ConvexNormal, FrechetCap };

/// Unit vectors y* with <y*, e> > tau |e| used by the cap variants: {e} in
/// one dimension, 64 deterministic directions (including e) otherwise.
std::vector<Vec> cap_directions(const Vec& e, double tau);

/// d_gamma((0, -y*), N) for the graph normal cone at (x, y).
double t2_distance(const SetValuedMap& f, const Vec& p, const Vec& x, const Vec& y, const Vec& ystar, double gamma,
                   ConeKind kind = ConeKind::Clarke);

/// Normal-cone condition d_gamma((0, -y*), N_{gph F_p}(x, y)) >= alpha for
/// y* = (y - ybar) / |y - ybar| (ConvexNormal) or every y* in the tau-cap
/// (FrechetCap). Necessity mode needs single convex polyhedral graphs.
Certificate check_T2(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                     const CheckOptions& opt = {}, T2Variant variant = T2Variant::ConvexNormal);

/// inf { |x*| : x* in D*F_p(x, y)(v*), |v* - y*| < eta }.
/// InputError when (x, y) is not a graph point.
CoderivativeBallDistance coderivative_distance(const SetValuedMap& f, const Vec& p, const Vec& x, const Vec& y,
                                               const Vec& ystar, double eta, ConeKind kind = ConeKind::Clarke);

/// inf { |x*| : (x*, -w) in K } for a fixed w, +inf when D*(w) is empty.
double normalized_coderivative_norm(const ConeRep& k, int xdim, const Vec& w);

enum class CoderivativeForm { Ball, Normalized };

/// Coderivative conditions with their own radius `eta` (independent of the
/// parameter-ball radius of the query).
///  - Ball, sufficient: d(0, D*F_p(x, y)(B_eta(y*))) >= alpha.
///  - Ball, necessary: the same distance >= alpha (1 - eta), eta in ]0, 1[,
///    convex graphs, scan over B_delta.
///  - Normalized: d(0, D*F_p(x, y)(v* / |v*|)) >= alpha / (1 - eta) for all
///    v* in B_eta(y*), eta in ]0, 1[ (sufficiency only).
/// ConeKind::Clarke uses the singleton y*; Frechet uses the tau-cap.
Certificate check_C33_C34(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                          CoderivativeForm form, double eta, const CheckOptions& opt = {},
                          ConeKind kind = ConeKind::Clarke);

}  // namespace regulab
