#include "regulab/slope.hpp"

#include <algorithm>
#include <cmath>

#include "regulab/convex.hpp"
#include "regulab/errors.hpp"

namespace regulab {
namespace detail {

double quotient(const Vec& u, const Vec& v, const Vec& x, const Vec& y, const Vec& ybar, double gamma) {
  const double d = std::max((u - x).norm(), gamma * (v - y).norm());
  if (!(d > 0)) return -kInf;
  return ((y - ybar).norm() - (v - ybar).norm()) / d;
}

std::vector<Probe> local_probes(const SetValuedMap& f, const Vec& p, const Vec& x, const Vec& y, const Vec& ybar,
                                double gamma, const SlopeSchedule& schedule) {
  std::vector<Probe> out;
  const double yn = (y - ybar).norm();
  if (!(yn > 0)) return out;
  const Vec e = (y - ybar) / yn;
  const int nx = f.xdim();
  const double r_base = schedule.r0_rel * std::min(1.0, yn);

  auto emit = [&](const Vec& dx, const Vec& dy, double r0, const Polyhedron* piece) {
    for (int k = 0; k < schedule.levels; ++k) {
      const double r = r0 * std::ldexp(1.0, -k);
      const Vec u = x + r * dx;
      if (piece) {
        const Vec v = y + r * dy;
        if (piece->contains(concat(u, v), 1e-9)) out.push_back({u, v, k});
      } else {
        out.push_back({u, f.rule().value(p, u), k});
      }
    }
  };

  if (f.is_closed_form()) {
    for (const auto& t : f.graph_tangent_cones(p, x, y)) {
      const TangentDirection d = best_tangent_direction(t, nx, -e, gamma);
      if (d.dx.norm() + d.dy.norm() < 1e-14) continue;
      emit(d.dx, d.dy, r_base, nullptr);
    }
    return out;
  }
  const Vec z = concat(x, y);
  const RegionSpec g = f.graph(p);
  for (const auto& piece : g.poly().pieces) {
    if (!piece.contains(z, 1e-8)) continue;
    const ConeRep t = cone_from_inequalities(active_rows(piece, z, 1e-8), nx + f.ydim());
    const TangentDirection d = best_tangent_direction(t, nx, -e, gamma);
    const Vec dz = concat(d.dx, d.dy);
    if (dz.norm() < 1e-14) continue;
    double t_max = kInf;
    for (int i = 0; i < piece.rows(); ++i) {
      const double rate = piece.A.row(i).dot(dz);
      if (rate > 1e-14) t_max = std::min(t_max, (piece.b[i] - piece.A.row(i).dot(z)) / rate);
    }
    const double r0 = std::min(r_base, 0.5 * std::max(0.0, t_max));
    if (!(r0 > 0)) continue;
    emit(d.dx, d.dy, r0, &piece);
  }
  return out;
}

}  // namespace detail

namespace {

struct Region {
  double x_radius;
  double y_radius;
  bool contains(const Vec& u, const Vec& v, const Vec& xbar, const Vec& ybar) const {
    return strictly_below((u - xbar).norm(), x_radius) && strictly_below((v - ybar).norm(), y_radius);
  }
};

double nonlocal_from_sample(const SetValuedMap& f, const ScanSetup& s, const ParamSample& sample,
                            std::optional<std::size_t> self, const Vec& x, const Vec& y, double gamma,
                            const Region& region, const SlopeSchedule& schedule) {
  double best = 0.0;
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    if (self && *self == j) continue;
    const auto& g = sample.points[j];
    if (!strictly_below(g.xdist, region.x_radius) || !strictly_below(g.ynorm, region.y_radius)) continue;
    best = std::max(best, detail::quotient(g.x, g.y, x, y, s.ybar, gamma));
  }
  const Projection sol = f.dist_to_solutions(sample.p, x, s.ybar);
  if (sol.nearest && region.contains(*sol.nearest, s.ybar, s.xbar, s.ybar)) {
    best = std::max(best, detail::quotient(*sol.nearest, s.ybar, x, y, s.ybar, gamma));
  }
  for (const auto& pr : detail::local_probes(f, sample.p, x, y, s.ybar, gamma, schedule)) {
    if (region.contains(pr.u, pr.v, s.xbar, s.ybar)) best = std::max(best, detail::quotient(pr.u, pr.v, x, y, s.ybar, gamma));
  }
  return best;
}

LocalSlope local_from_probes(const std::vector<detail::Probe>& probes, const Vec& x, const Vec& y, const Vec& ybar,
                             double gamma, const SlopeSchedule& schedule, double r0) {
  LocalSlope out;
  out.level_values.assign(schedule.levels, 0.0);
  for (int k = 0; k < schedule.levels; ++k) out.radii.push_back(r0 * std::ldexp(1.0, -k));
  for (const auto& pr : probes) {
    out.level_values[pr.level] = std::max(out.level_values[pr.level], detail::quotient(pr.u, pr.v, x, y, ybar, gamma));
  }
  const int first = std::max(0, schedule.levels - schedule.stable);
  for (int k = first; k < schedule.levels; ++k) out.value = std::max(out.value, out.level_values[k]);
  return out;
}

void record_schedule(ScanMeta& meta, const SlopeSchedule& schedule) {
  meta.set("slope_r0_rel", schedule.r0_rel);
  meta.set("slope_levels", schedule.levels);
  meta.set("slope_stable_levels", schedule.stable);
}

}  // namespace

double psi(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& u, const Vec& v) {
  if (!f.in_graph(p, u, v)) return kInf;
  return (v - q.ybar).norm();
}

LocalSlope local_slope(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& x, const Vec& y,
                       double gamma, const SlopeSchedule& schedule) {
  if (!f.in_graph(p, x, y)) throw InputError("local_slope: (x, y) is not a graph point");
  const auto probes = detail::local_probes(f, p, x, y, q.ybar, gamma, schedule);
  return local_from_probes(probes, x, y, q.ybar, gamma, schedule,
                           schedule.r0_rel * std::min(1.0, (y - q.ybar).norm()));
}

double nonlocal_slope(const SetValuedMap& f, const RegularityQuery& q, const Vec& p, const Vec& x, const Vec& y,
                      const ScanGrids& grids, double gamma) {
  if (!f.in_graph(p, x, y)) throw InputError("nonlocal_slope: (x, y) is not a graph point");
  const ScanSetup s = prepare_scan(f, q, grids);
  const Region region{s.delta + s.mu, s.alpha * s.mu};
  const ParamSample sample = sample_graph(f, s, p, region.x_radius, region.y_radius);
  std::optional<std::size_t> self;
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    if (sample.points[j].x == x && sample.points[j].y == y) self = j;
  }
  return nonlocal_from_sample(f, s, sample, self, x, y, gamma, region, SlopeSchedule{});
}

Certificate check_theorem_P1(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                             const CheckOptions& opt) {
  const ScanSetup s = prepare_scan(f, q, grids);
  const double gamma = gamma_for(s, opt);
  const Region region{s.delta + s.mu, s.alpha * s.mu};
  ConditionSpec spec;
  spec.check = "P1";
  spec.inequality = "nonlocal gamma-slope of psi_p >= alpha";
  spec.threshold = s.alpha;
  spec.compare_tol = compare_tol_for(opt);
  spec.x_radius = scan_radius_for(s, opt);
  spec.graph_x_radius = region.x_radius;
  spec.graph_y_radius = region.y_radius;
  const SlopeSchedule schedule;
  Certificate c = run_condition(f, s, spec, [&](const ParamSample& sample, std::size_t i) {
    const auto& g = sample.points[i];
    return PointValue{nonlocal_from_sample(f, s, sample, i, g.x, g.y, gamma, region, schedule), {}};
  });
  c.meta.gamma = gamma;
  c.meta.notes.push_back("mode=" + to_string(opt.mode));
  record_schedule(c.meta, schedule);
  return c;
}

Certificate check_corollary_C22(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids,
                                const CheckOptions& opt) {
  if (opt.mode == Mode::Necessary && !f.graph_convex()) {
    throw InputError("C22 necessity requires every gph F_p to be convex (a single polyhedron)");
  }
  const ScanSetup s = prepare_scan(f, q, grids);
  const double gamma = gamma_for(s, opt);
  ConditionSpec spec;
  spec.check = "C22";
  spec.inequality = "local gamma-slope of psi_p >= alpha";
  spec.threshold = s.alpha;
  spec.compare_tol = compare_tol_for(opt);
  spec.x_radius = scan_radius_for(s, opt);
  const SlopeSchedule schedule;
  Certificate c = run_condition(f, s, spec, [&](const ParamSample& sample, std::size_t i) {
    const auto& g = sample.points[i];
    const auto probes = detail::local_probes(f, sample.p, g.x, g.y, s.ybar, gamma, schedule);
    const double r0 = schedule.r0_rel * std::min(1.0, g.ynorm);
    return PointValue{local_from_probes(probes, g.x, g.y, s.ybar, gamma, schedule, r0).value, {}};
  });
  c.meta.gamma = gamma;
  c.meta.notes.push_back("mode=" + to_string(opt.mode));
  record_schedule(c.meta, schedule);
  return c;
}

}  // namespace regulab
