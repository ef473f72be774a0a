#include "regulab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regulab/errors.hpp"
#include "regulab/parallel.hpp"

namespace regulab {

std::string ScanGrids::resolution_label() const {
  std::ostringstream os;
  if (p) os << "p" << p->resolution << "^" << p->dim() << ";";
  os << "x" << x.resolution << "^" << x.dim();
  if (y) os << ";y" << y->resolution << "^" << y->dim();
  return os.str();
}

bool strictly_below(double value, double bound) {
  if (std::isinf(bound)) return std::isfinite(value) && bound > 0;
  return value <= bound - kStrictRel * std::abs(bound) && value < bound;
}

std::string to_string(Mode m) { return m == Mode::Sufficient ? "sufficient" : "necessary"; }

namespace {

double farthest_corner(const GridSpec& g, const Vec& c) {
  double s = 0.0;
  for (int i = 0; i < g.dim(); ++i) {
    const double d = std::max(std::abs(g.lower[i] - c[i]), std::abs(g.upper[i] - c[i]));
    s += d * d;
  }
  return std::sqrt(s) + g.max_spacing();
}

}  // namespace

ScanSetup prepare_scan(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids) {
  q.validate(f);
  grids.x.validate();
  if (grids.x.dim() != f.xdim()) throw InputError("x grid dimension does not match dim X");
  if (grids.y) {
    grids.y->validate();
    if (grids.y->dim() != f.ydim()) throw InputError("y grid dimension does not match dim Y");
  }
  const auto& carrier = f.carrier();
  const bool normed = carrier.kind == ParameterCarrier::Kind::Normed;
  if (grids.p) {
    grids.p->validate();
    if (!normed || grids.p->dim() != carrier.dim) throw InputError("p grid requires a normed P of matching dimension");
  }

  ScanSetup s;
  s.xbar = q.xbar;
  s.ybar = q.ybar;
  s.alpha = q.alpha;
  s.gamma = q.gamma;
  s.tau = q.tau;
  const double cap_x = farthest_corner(grids.x, q.xbar);
  bool clamped = false;
  s.delta = q.delta.clamp(cap_x, clamped);
  if (clamped) s.meta.clamps.push_back("delta=+inf clamped to " + std::to_string(cap_x));
  clamped = false;
  s.mu = q.mu.clamp(cap_x, clamped);
  if (clamped) s.meta.clamps.push_back("mu=+inf clamped to " + std::to_string(cap_x));

  if (!normed) {
    for (int l = 0; l < carrier.labels; ++l) s.params.push_back(Vec::Constant(1, l));
    s.eta = q.eta.is_unbounded() ? kInf : q.eta.value();
  } else if (carrier.dim == 0) {
    s.params.push_back(Vec::Zero(0));
    s.eta = q.eta.is_unbounded() ? kInf : q.eta.value();
  } else if (grids.p) {
    const auto pts = make_grid(*grids.p, grids.max_points);
    if (q.pbar) {
      const double cap_p = farthest_corner(*grids.p, *q.pbar);
      clamped = false;
      s.eta = q.eta.clamp(cap_p, clamped);
      if (clamped) s.meta.clamps.push_back("eta=+inf clamped to " + std::to_string(cap_p));
      bool has_pbar = false;
      for (const auto& p : pts) {
        const double d = (p - *q.pbar).norm();
        if (strictly_below(d, s.eta)) s.params.push_back(p);
        if (d == 0.0) has_pbar = true;
      }
      if (!has_pbar) s.params.push_back(*q.pbar);
    } else {
      s.params = pts;
      s.eta = kInf;
    }
  } else {
    if (!q.pbar) throw InputError("a normed parameter space needs pbar or a p grid");
    s.params.push_back(*q.pbar);
    s.eta = q.eta.is_unbounded() ? kInf : q.eta.value();
  }

  const std::size_t x_count = grids.x.point_count();
  if (x_count > grids.max_points || s.params.size() > grids.max_points / std::max<std::size_t>(1, x_count)) {
    const double total = static_cast<double>(x_count) * static_cast<double>(s.params.size());
    throw ResourceError("scan exceeds the point cap", static_cast<std::size_t>(std::min(total, 1.8e19)));
  }
  s.xs = make_grid(grids.x, grids.max_points);
  if (grids.y) s.ys = make_grid(*grids.y, grids.max_points);

  s.meta.alpha = s.alpha;
  s.meta.delta = s.delta;
  s.meta.mu = s.mu;
  s.meta.eta = s.eta;
  s.meta.gamma = s.gamma;
  s.meta.tau = s.tau;
  s.meta.grid_res = grids.resolution_label();
  s.meta.strict_tol = kStrictRel;
  s.meta.sampled = !f.exact();
  return s;
}

ParamSample sample_graph(const SetValuedMap& f, const ScanSetup& s, const Vec& p, double x_radius, double y_radius) {
  ParamSample out;
  out.p = p;
  std::vector<std::vector<GraphPoint>> slots(s.xs.size());
  parallel_for(s.xs.size(), [&](std::size_t i) {
    const Vec& x = s.xs[i];
    const double xd = (x - s.xbar).norm();
    if (!strictly_below(xd, x_radius)) return;
    const RegionSpec values = f.eval(p, x);
    const Projection near = dist_to_region(s.ybar, values);
    if (!near.nearest) return;
    auto& slot = slots[i];
    const double yn = (*near.nearest - s.ybar).norm();
    if (strictly_below(yn, y_radius)) slot.push_back({x, *near.nearest, yn, near.distance, xd, i});
    for (const auto& y : s.ys) {
      const double d = (y - s.ybar).norm();
      if (!strictly_below(d, y_radius) || (y - *near.nearest).norm() <= 1e-12) continue;
      if (values.contains(y, 1e-10)) slot.push_back({x, y, d, near.distance, xd, i});
    }
  });
  for (auto& slot : slots) {
    for (auto& g : slot) out.points.push_back(std::move(g));
  }
  return out;
}

std::vector<std::size_t> outer_points(const ParamSample& sample, double scan_radius, double y_radius) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const auto& g = sample.points[i];
    if (g.residual > kResidualZero && strictly_below(g.xdist, scan_radius) && strictly_below(g.ynorm, y_radius)) {
      out.push_back(i);
    }
  }
  return out;
}

Certificate run_condition(const SetValuedMap& f, const ScanSetup& s, const ConditionSpec& spec,
                          const PointEvaluator& eval) {
  Certificate cert;
  cert.check = spec.check;
  cert.meta = s.meta;
  cert.meta.threshold = spec.threshold;
  cert.meta.x_radius = spec.x_radius;
  cert.meta.compare_tol = spec.compare_tol;
  const double allowed = spec.compare_tol * std::max(1.0, std::abs(spec.threshold));
  const double y_radius = s.alpha * s.mu;
  double worst = kInf;
  std::size_t scanned = 0;
  for (const auto& p : s.params) {
    const ParamSample sample =
        sample_graph(f, s, p, std::max(spec.x_radius, spec.graph_x_radius), std::max(y_radius, spec.graph_y_radius));
    const auto idx = outer_points(sample, spec.x_radius, y_radius);
    std::vector<PointValue> values(idx.size());
    parallel_for(idx.size(), [&](std::size_t k) { values[k] = eval(sample, idx[k]); });
    scanned += idx.size();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double slack = values[k].value - spec.threshold;
      if (!values[k].flag.empty() &&
          std::find(cert.flags.begin(), cert.flags.end(), values[k].flag) == cert.flags.end()) {
        cert.flags.push_back(values[k].flag);
      }
      if (slack < worst) {
        worst = slack;
        const auto& g = sample.points[idx[k]];
        cert.witness = Witness{p, g.x, g.y, values[k].value};
      }
    }
  }
  cert.meta.scanned = scanned;
  cert.margin = worst;
  if (scanned == 0) {
    cert.verdict = Verdict::Holds;
    cert.meta.notes.push_back("vacuous: no outer points in the scan region");
    cert.witness.reset();
    return cert;
  }
  if (worst < -allowed) {
    cert.verdict = Verdict::Violated;
    cert.failed = spec.inequality;
  } else {
    cert.verdict = Verdict::Holds;
    cert.witness.reset();
  }
  return cert;
}

}  // namespace regulab

namespace regulab {

double scan_radius_for(const ScanSetup& s, const CheckOptions& opt) {
  if (opt.scan_radius) return *opt.scan_radius;
  return opt.mode == Mode::Necessary ? s.delta : s.delta + s.mu;
}

double gamma_for(const ScanSetup& s, const CheckOptions& opt) {
  return opt.mode == Mode::Necessary ? 1.0 / s.alpha : s.gamma;
}

double compare_tol_for(const CheckOptions& opt) { return opt.mode == Mode::Necessary ? 1e-6 : 1e-7; }

}  // namespace regulab
