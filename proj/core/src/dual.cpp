#include "regulab/dual.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "regulab/errors.hpp"

namespace regulab {
namespace {

constexpr int kCapSize = 64;

double radical_inverse(std::size_t i, int base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::size_t>(base));
    i /= static_cast<std::size_t>(base);
  }
  return r;
}

Mat orthogonal_complement(const Vec& e) {
  const int n = static_cast<int>(e.size());
  Eigen::JacobiSVD<Mat> svd(e.transpose(), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(n - 1);
}

// Unit vectors within angle `max_angle` of the unit vector e: e itself and
// kCapSize - 1 deterministic tilts e cos(t) + u sin(t).
std::vector<Vec> spherical_cap(const Vec& e, double max_angle) {
  std::vector<Vec> out{e};
  const int n = static_cast<int>(e.size());
  if (n == 1 || !(max_angle > 0)) return out;
  const Mat u = orthogonal_complement(e);
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int j = 1; j < kCapSize; ++j) {
    Vec dir;
    double t = 0.0;
    if (n == 2) {
      const int level = (j + 1) / 2;
      t = max_angle * level / (kCapSize / 2);
      dir = u.col(0) * (j % 2 == 1 ? 1.0 : -1.0);
    } else {
      t = max_angle * radical_inverse(static_cast<std::size_t>(j), 2);
      Vec c(n - 1);
      for (int i = 0; i < n - 1; ++i) {
        const int base = kPrimes[(i + 1) % 12];
        c[i] = 2.0 * radical_inverse(static_cast<std::size_t>(j), base) - 1.0;
      }
      if (c.norm() < 1e-12) c = Vec::Unit(n - 1, 0);
      dir = u * c.normalized();
    }
    out.push_back(std::cos(t) * e + std::sin(t) * dir);
  }
  return out;
}

void require_convex(const SetValuedMap& f, const char* what) {
  if (!f.graph_convex()) {
    throw InputError(std::string(what) + " requires every gph F_p to be a single convex polyhedron");
  }
}

void require_cone_kind(const SetValuedMap& f, ConeKind kind, const char* what) {
  if (kind == ConeKind::Clarke && !f.graph_convex() && !f.is_closed_form()) {
    throw InputError(std::string(what) +
                     ": the Clarke branch is supported on convex polyhedral or smooth closed-form graphs only");
  }
}

Vec unit_residual(const Vec& y, const Vec& ybar) { return (y - ybar).normalized(); }

std::vector<Vec> candidates(const Vec& e, ConeKind kind, double tau) {
  if (kind == ConeKind::Clarke) return {e};
  return cap_directions(e, tau);
}

void annotate(Certificate& c, const CheckOptions& opt, double gamma, ConeKind kind) {
  c.meta.gamma = gamma;
  c.meta.notes.push_back("mode=" + to_string(opt.mode));
  c.meta.notes.push_back(kind == ConeKind::Clarke ? "cone=clarke" : "cone=frechet");
}

}  // namespace

double PsiSubdifferential::distance(double gamma) const {
  if (norm_part.unit_ball) return 0.0;
  return dual_cone_distance(Vec::Zero(xdim), -norm_part.direction, normal, gamma);
}

PsiSubdifferential subdiff_psi(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& x,
                               const Vec& y) {
  require_convex(f, "subdiff_psi (sum rule)");
  if (!f.in_graph(p, x, y)) throw InputError("subdiff_psi: (x, y) is not a graph point");
  PsiSubdifferential out;
  out.xdim = f.xdim();
  out.norm_part = norm_subdifferential(y, q.ybar);
  out.normal = f.graph_normal_cone(p, x, y);
  return out;
}

std::vector<Vec> cap_directions(const Vec& e, double tau) {
  if (!(tau > 0 && tau < 1)) throw InputError("cap_directions: tau must lie in ]0, 1[");
  const Vec u = e.normalized();
  return spherical_cap(u, 0.999 * std::acos(tau));
}

double t2_distance(const SetValuedMap& f, const Vec& p, const Vec& x, const Vec& y, const Vec& ystar, double gamma,
                   ConeKind kind) {
  require_cone_kind(f, kind, "t2_distance");
  if (!f.in_graph(p, x, y)) throw InputError("t2_distance: (x, y) is not a graph point");
  return dual_cone_distance(Vec::Zero(f.xdim()), -ystar, f.graph_normal_cone(p, x, y), gamma);
}

CoderivativeBallDistance coderivative_distance(const SetValuedMap& f, const Vec& p, const Vec& x, const Vec& y,
                                               const Vec& ystar, double eta, ConeKind kind) {
  require_cone_kind(f, kind, "coderivative_distance");
  if (!f.in_graph(p, x, y)) throw InputError("coderivative_distance: (x, y) is not a graph point");
  return coderivative_ball_distance(f.graph_normal_cone(p, x, y), f.xdim(), ystar, eta);
}

double normalized_coderivative_norm(const ConeRep& k, int xdim, const Vec& w) {
  if (k.empty) return kInf;
  const auto d = weighted_cone_distance(Vec::Zero(xdim), -w, k, 1.0, 1e9);
  if (!std::isfinite(d.value) || (d.ky + w).norm() > 1e-9) return kInf;
  return d.kx.norm();
}

Certificate check_P5(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids, const CheckOptions& opt,
                     ConeKind kind, std::optional<double> c7_epsilon) {
  if (kind == ConeKind::Clarke) require_convex(f, "P5 (exact sum-rule branch)");
  if (opt.mode == Mode::Necessary) require_convex(f, "P5 necessity");
  const ScanSetup s = prepare_scan(f, q, grids);
  const double gamma = gamma_for(s, opt);
  const double eps = c7_epsilon.value_or(s.alpha * gamma);
  if (!(eps > 0)) throw InputError("P5: the C7 epsilon must be positive");
  const std::string c7_flag =
      "small-coderivative: a subgradient with |y*| < " + std::to_string(eps) + " has |x*| < alpha";
  const double flag_below = s.alpha - compare_tol_for(opt) * std::max(1.0, s.alpha);
  ConditionSpec spec;
  spec.check = "P5";
  spec.inequality = "d_gamma(0, subdifferential of psi_p) >= alpha";
  spec.threshold = s.alpha;
  spec.compare_tol = compare_tol_for(opt);
  spec.x_radius = scan_radius_for(s, opt);
  const int nx = f.xdim();
  Certificate c = run_condition(f, s, spec, [&](const ParamSample& sample, std::size_t i) {
    const auto& g = sample.points[i];
    const ConeRep n = f.graph_normal_cone(sample.p, g.x, g.y);
    const Vec e = unit_residual(g.y, s.ybar);
    PointValue v{dual_cone_distance(Vec::Zero(nx), -e, n, gamma), {}};
    if (coderivative_ball_distance(n, nx, e, eps).value < flag_below) v.flag = c7_flag;
    return v;
  });
  annotate(c, opt, gamma, kind);
  c.meta.set("c7_epsilon", eps);
  if (opt.mode == Mode::Necessary) {
    c.meta.notes.push_back("at gamma = 1/alpha this is |x*| >= alpha (1 - |y*|) for every subgradient");
  }
  return c;
}

Certificate check_T2(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids, const CheckOptions& opt,
                     T2Variant variant) {
  const ConeKind kind = variant == T2Variant::ConvexNormal ? ConeKind::Clarke : ConeKind::Frechet;
  require_cone_kind(f, kind, "T2");
  if (opt.mode == Mode::Necessary) {
    require_convex(f, "T2 necessity");
    if (variant != T2Variant::ConvexNormal) throw InputError("T2 necessity uses the exact candidate y* only");
  }
  if (!(q.tau > 0 && q.tau < 1)) throw InputError("T2: tau must lie in ]0, 1[");
  const ScanSetup s = prepare_scan(f, q, grids);
  const double gamma = gamma_for(s, opt);
  ConditionSpec spec;
  spec.check = "T2";
  spec.inequality = "d_gamma((0, -y*), N_gph(x, y)) >= alpha";
  spec.threshold = s.alpha;
  spec.compare_tol = compare_tol_for(opt);
  spec.x_radius = scan_radius_for(s, opt);
  const int nx = f.xdim();
  Certificate c = run_condition(f, s, spec, [&](const ParamSample& sample, std::size_t i) {
    const auto& g = sample.points[i];
    const ConeRep n = f.graph_normal_cone(sample.p, g.x, g.y);
    double best = kInf;
    for (const auto& ys : candidates(unit_residual(g.y, s.ybar), kind, s.tau)) {
      best = std::min(best, dual_cone_distance(Vec::Zero(nx), -ys, n, gamma));
    }
    return PointValue{best, {}};
  });
  annotate(c, opt, gamma, kind);
  if (variant == T2Variant::FrechetCap) c.meta.notes.push_back("y* sampled from the tau-cap");
  return c;
}

Certificate check_C33_C34(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                          CoderivativeForm form, double eta, const CheckOptions& opt, ConeKind kind) {
  require_cone_kind(f, kind, form == CoderivativeForm::Ball ? "C33" : "C34");
  if (!(eta > 0)) throw InputError("coderivative condition: eta must be positive");
  const bool necessary = opt.mode == Mode::Necessary;
  if (form == CoderivativeForm::Normalized || necessary) {
    if (!(eta < 1)) throw InputError("coderivative condition: this form needs eta in ]0, 1[");
  }
  if (necessary) {
    if (form != CoderivativeForm::Ball) throw InputError("C34 has no necessity counterpart; use the ball form");
    require_convex(f, "coderivative necessity");
    if (kind != ConeKind::Clarke) throw InputError("coderivative necessity uses the exact candidate y* only");
  }
  const ScanSetup s = prepare_scan(f, q, grids);
  ConditionSpec spec;
  const int nx = f.xdim();
  if (form == CoderivativeForm::Ball) {
    spec.check = necessary ? "C49" : "C33";
    spec.threshold = necessary ? s.alpha * (1.0 - eta) : s.alpha;
    spec.inequality = necessary ? "d(0, D*F_p(x,y)(B_eta(y*))) >= alpha (1 - eta)" : "d(0, D*F_p(x,y)(B_eta(y*))) >= alpha";
  } else {
    spec.check = "C34";
    spec.threshold = s.alpha / (1.0 - eta);
    spec.inequality = "d(0, D*F_p(x,y)(v*/|v*|)) >= alpha / (1 - eta)";
  }
  spec.compare_tol = compare_tol_for(opt);
  spec.x_radius = scan_radius_for(s, opt);
  const double cap_angle = eta < 1 ? 0.999 * std::asin(eta) : 0.0;
  Certificate c = run_condition(f, s, spec, [&](const ParamSample& sample, std::size_t i) {
    const auto& g = sample.points[i];
    const ConeRep n = f.graph_normal_cone(sample.p, g.x, g.y);
    double best = kInf;
    bool all_vacuous = true;
    for (const auto& ys : candidates(unit_residual(g.y, s.ybar), kind, s.tau)) {
      if (form == CoderivativeForm::Ball) {
        const auto d = coderivative_ball_distance(n, nx, ys, eta);
        all_vacuous = all_vacuous && d.vacuous;
        best = std::min(best, d.value);
      } else {
        for (const auto& w : spherical_cap(ys, cap_angle)) {
          const double h = normalized_coderivative_norm(n, nx, w);
          all_vacuous = all_vacuous && std::isinf(h);
          best = std::min(best, h);
        }
      }
    }
    return PointValue{best, all_vacuous ? "empty coderivative over the eta-ball at some point" : ""};
  });
  annotate(c, opt, s.gamma, kind);
  c.meta.set("coderivative_eta", eta);
  if (form == CoderivativeForm::Normalized && f.ydim() > 1) {
    c.meta.notes.push_back("v*/|v*| sampled on the cap of half-angle arcsin(eta)");
  }
  return c;
}

}  // namespace regulab
