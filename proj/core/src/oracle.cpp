#include "regulab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "regulab/parallel.hpp"

namespace regulab {
namespace {

struct ResidualPoint {
  bool scanned = false;
  double r = kInf;
  double d = kInf;
  Vec y;
};

// Residual and distance to the solution set for each x in B_delta(xbar);
// `r_bound` is the strict upper bound on residuals that enter the scan.
std::vector<ResidualPoint> residual_points(const SetValuedMap& f, const ScanSetup& s, const Vec& p, double r_bound) {
  std::vector<ResidualPoint> out(s.xs.size());
  const RegionSpec sol = f.solution_set(p, s.ybar);
  parallel_for(s.xs.size(), [&](std::size_t i) {
    const Vec& x = s.xs[i];
    if (!strictly_below((x - s.xbar).norm(), s.delta)) return;
    const Projection near = f.nearest_value(p, x, s.ybar);
    if (!strictly_below(near.distance, r_bound)) return;
    auto& rp = out[i];
    rp.scanned = true;
    rp.r = near.distance;
    rp.y = *near.nearest;
    rp.d = rp.r <= kResidualZero ? 0.0 : dist_to_region(x, sol).distance;
  });
  return out;
}

double oracle_tol(double r) { return 1e-10 * std::max(1.0, r); }

// Witness order: smaller ratio first; ratios within a relative 1e-9 count as
// tied and the point closer to xbar wins.
bool better_witness(double ratio, double xdist, double best_ratio, double best_xdist) {
  if (!std::isfinite(best_ratio)) return true;
  const double tie = 1e-9 * std::max(1e-300, std::abs(best_ratio));
  if (ratio < best_ratio - tie) return true;
  return ratio <= best_ratio + tie && xdist < best_xdist;
}

}  // namespace

Certificate check_subreg_uniform(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids) {
  const ScanSetup s = prepare_scan(f, q, grids);
  Certificate cert;
  cert.check = "oracle";
  cert.meta = s.meta;
  cert.meta.x_radius = s.delta;
  cert.meta.threshold = s.alpha;
  cert.meta.compare_tol = 1e-10;
  double worst = kInf;
  double best_ratio = kInf, best_xdist = kInf;
  bool violated = false;
  for (const auto& p : s.params) {
    const auto pts = residual_points(f, s, p, s.alpha * s.mu);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& rp = pts[i];
      if (!rp.scanned) continue;
      ++cert.meta.scanned;
      const double slack = rp.r - s.alpha * rp.d;
      worst = std::min(worst, slack);
      if (slack < -oracle_tol(rp.r)) {
        violated = true;
        const double ratio = rp.r / rp.d;
        const double xdist = (s.xs[i] - s.xbar).norm();
        if (better_witness(ratio, xdist, best_ratio, best_xdist)) {
          best_ratio = ratio;
          best_xdist = xdist;
          cert.witness = Witness{p, s.xs[i], rp.y, ratio};
        }
      }
    }
  }
  cert.margin = worst;
  if (cert.meta.scanned == 0) {
    cert.verdict = Verdict::Inconclusive;
    cert.meta.notes.push_back("no grid point of B_delta(xbar) has residual < alpha*mu");
    cert.witness.reset();
  } else if (violated) {
    cert.verdict = Verdict::Violated;
    cert.failed = "alpha*d(x,G(p)) <= d(ybar,F(p,x))";
  } else {
    cert.verdict = Verdict::Holds;
    cert.witness.reset();
  }
  return cert;
}

Certificate check_geometric(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids) {
  const ScanSetup s = prepare_scan(f, q, grids);
  Certificate cert;
  cert.check = "geometric";
  cert.meta = s.meta;
  cert.meta.x_radius = s.delta;
  cert.meta.threshold = s.alpha;
  cert.meta.compare_tol = 1e-10;
  cert.meta.notes.push_back("per point, the tested radius is rho = min(d(x,G(p)), mu^-)");
  const double mu_below = s.mu * (1.0 - kStrictRel);
  double worst = kInf;
  double best_ratio = kInf, best_xdist = kInf;
  bool violated = false;
  for (const auto& p : s.params) {
    const auto pts = residual_points(f, s, p, s.alpha * s.mu);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& rp = pts[i];
      if (!rp.scanned) continue;
      ++cert.meta.scanned;
      // The ball B_rho(x) misses G(p) exactly when rho <= d(x, G(p)); the
      // largest such rho below mu gives the sharpest test of residual < alpha rho.
      const double rho = std::min(rp.d, mu_below);
      if (!(rho > 0)) continue;
      const double slack = rp.r - s.alpha * rho;
      worst = std::min(worst, slack);
      if (slack < -oracle_tol(rp.r)) {
        violated = true;
        const double xdist = (s.xs[i] - s.xbar).norm();
        if (better_witness(rp.r / rho, xdist, best_ratio, best_xdist)) {
          best_ratio = rp.r / rho;
          best_xdist = xdist;
          cert.witness = Witness{p, s.xs[i], rp.y, rho};
        }
      }
    }
  }
  cert.margin = worst;
  if (cert.meta.scanned == 0) {
    cert.verdict = Verdict::Inconclusive;
    cert.meta.notes.push_back("no grid point of B_delta(xbar) has residual < alpha*mu");
    cert.witness.reset();
  } else if (violated) {
    cert.verdict = Verdict::Violated;
    cert.failed = "G(p) meets B_rho(x) whenever d(ybar,F(p,x)) < alpha*rho";
  } else {
    cert.verdict = Verdict::Holds;
    cert.witness.reset();
    if (!std::isfinite(cert.margin)) cert.margin = 0.0;
  }
  return cert;
}

ModulusEstimate estimate_modulus(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids) {
  const ScanSetup s = prepare_scan(f, q, grids);
  ModulusEstimate out;
  out.meta = s.meta;
  out.meta.x_radius = s.delta;
  double best_bound = kInf, best_xdist = kInf;
  for (const auto& p : s.params) {
    const auto pts = residual_points(f, s, p, kInf);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& rp = pts[i];
      if (!rp.scanned || rp.r <= kResidualZero) continue;
      ++out.scanned;
      const double ratio = rp.r / rp.d;
      const double bound = std::max(ratio, rp.r / s.mu);
      const double xdist = (s.xs[i] - s.xbar).norm();
      out.value = std::min(out.value, bound);
      if (better_witness(bound, xdist, best_bound, best_xdist)) {
        best_bound = bound;
        best_xdist = xdist;
        out.argmin = Witness{p, s.xs[i], rp.y, ratio};
      }
    }
  }
  out.vacuous = out.scanned == 0;
  if (out.vacuous) out.meta.notes.push_back("no scanned point lies outside the solution set");
  out.meta.set("modulus", out.value);
  return out;
}

bool recheck_witness(const SetValuedMap& f, const RegularityQuery& q, const Certificate& cert, double tol) {
  if (cert.verdict != Verdict::Violated || !cert.witness) return false;
  const auto& w = cert.witness.value();
  const double r = f.residual(w.p, w.x, q.ybar);
  const double d = f.dist_to_solutions(w.p, w.x, q.ybar).distance;
  if (!(q.alpha * d > r)) return false;
  const double ratio = d > 0 ? r / d : kInf;
  if (std::isinf(ratio) || std::isinf(w.value)) return std::isinf(ratio) == std::isinf(w.value);
  return std::abs(ratio - w.value) <= tol * std::max(1.0, std::abs(w.value));
}

}  // namespace regulab
