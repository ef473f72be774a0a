#include "regulab/implicit.hpp"

#include <cmath>

#include "regulab/errors.hpp"
#include "regulab/parallel.hpp"

namespace regulab {
namespace {

Extent to_extent(double v) { return std::isfinite(v) ? Extent(v) : Extent::unbounded(); }

void require_metric(const SetValuedMap& f, const char* what) {
  if (!f.carrier().has_metric()) throw InputError(std::string(what) + " needs a normed parameter space P");
}

// Points of G(p) inside B_delta(xbar): grid solutions plus the projections
// of the grid and of xbar onto G(p).
std::vector<Vec> solution_points(const RegionSpec& g, const ScanSetup& s) {
  std::vector<Vec> raw;
  if (g.known_empty()) return raw;
  std::vector<std::optional<Vec>> near(s.xs.size() + 1);
  parallel_for(near.size(), [&](std::size_t i) {
    const Vec& x = i < s.xs.size() ? s.xs[i] : s.xbar;
    if (!strictly_below((x - s.xbar).norm(), s.delta)) return;
    const Projection pr = dist_to_region(x, g);
    if (pr.nearest && strictly_below((*pr.nearest - s.xbar).norm(), s.delta)) near[i] = pr.nearest;
  });
  for (auto& n : near) {
    if (n) raw.push_back(std::move(*n));
  }
  return PointCloud(static_cast<int>(s.xbar.size()), std::move(raw)).points;
}

struct PairScan {
  std::string check;
  std::string inequality;
  double rate = 1.0;
};

// Scans p' in the parameter list, x in solution_points(G(p')), p with
// |p - p'| < mu, and compares lhs(p, x) against rate |p - p'|.
template <class Lhs>
Certificate scan_pairs(const ScanSetup& s, const std::vector<RegionSpec>& sols, const PairScan& spec, Lhs lhs) {
  Certificate cert;
  cert.check = spec.check;
  cert.meta = s.meta;
  cert.meta.threshold = spec.rate;
  cert.meta.x_radius = s.delta;
  cert.meta.compare_tol = 1e-10;
  cert.meta.set("l", spec.rate);
  cert.meta.notes.push_back("witness y slot holds p'");
  double worst = kInf;
  bool violated = false;
  const std::size_t np = s.params.size();
  for (std::size_t j = 0; j < np; ++j) {
    const Vec& pp = s.params[j];
    const auto xs = solution_points(sols[j], s);
    std::vector<double> slack(np * xs.size(), kInf);
    std::vector<double> ratio(np * xs.size(), 0.0);
    std::vector<double> lhs_at(np * xs.size(), 0.0);
    std::vector<char> used(np * xs.size(), 0);
    parallel_for(np, [&](std::size_t i) {
      const double d = (s.params[i] - pp).norm();
      if (!strictly_below(d, s.mu)) return;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double v = lhs(i, xs[k]);
        const std::size_t at = i * xs.size() + k;
        used[at] = 1;
        lhs_at[at] = v;
        slack[at] = spec.rate * d - v;
        ratio[at] = d > 0 ? v / d : (v > 0 ? kInf : 0.0);
      }
    });
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const std::size_t at = i * xs.size() + k;
        if (!used[at]) continue;
        ++cert.meta.scanned;
        if (slack[at] < worst) {
          worst = slack[at];
          cert.witness = Witness{s.params[i], xs[k], pp, ratio[at]};
        }
        const double v = lhs_at[at];
        if (std::isinf(v) || slack[at] < -1e-10 * std::max(1.0, std::abs(v))) violated = true;
      }
    }
  }
  cert.margin = worst;
  if (cert.meta.scanned == 0) {
    cert.verdict = Verdict::Inconclusive;
    cert.meta.notes.push_back("no solution point of G(p') lies in B_delta(xbar)");
    cert.witness.reset();
  } else if (violated) {
    cert.verdict = Verdict::Violated;
    cert.failed = spec.inequality;
  } else {
    cert.verdict = Verdict::Holds;
    cert.witness.reset();
  }
  return cert;
}

std::vector<RegionSpec> solution_sets(const SetValuedMap& f, const ScanSetup& s, const ScanGrids& grids) {
  std::vector<RegionSpec> out;
  out.reserve(s.params.size());
  for (const auto& p : s.params) out.push_back(f.solution_set(p, s.ybar, grids.x));
  return out;
}

}  // namespace

void AubinQuery::validate(const SetValuedMap& f) const {
  require_metric(f, "Aubin query");
  if (!(l > 0) || !std::isfinite(l)) throw InputError("Aubin query: the rate l must be positive and finite");
  f.carrier().check(pbar);
  if (xbar.size() != f.xdim() || ybar.size() != f.ydim()) throw InputError("Aubin query: dimension mismatch");
}

Certificate check_recede(const SetValuedMap& f, const RegularityQuery& q, double l, const ScanGrids& grids) {
  require_metric(f, "check_recede");
  if (!(l > 0) || !std::isfinite(l)) throw InputError("check_recede: l must be positive and finite");
  const ScanSetup s = prepare_scan(f, q, grids);
  const auto sols = solution_sets(f, s, grids);
  return scan_pairs(s, sols, {"recede", "d(ybar,F(p,x)) <= l d(p,p')", l},
                    [&](std::size_t i, const Vec& x) { return f.residual(s.params[i], x, s.ybar); });
}

Certificate check_aubin(const SetValuedMap& f, const AubinQuery& aq, const ScanGrids& grids) {
  aq.validate(f);
  RegularityQuery q;
  q.xbar = aq.xbar;
  q.ybar = aq.ybar;
  q.pbar = aq.pbar;
  q.delta = aq.delta;
  q.mu = aq.mu;
  q.eta = aq.eta;
  const ScanSetup s = prepare_scan(f, q, grids);
  const auto sols = solution_sets(f, s, grids);
  Certificate c = scan_pairs(s, sols, {"aubin", "d(x,G(p)) <= l d(p,p')", aq.l},
                             [&](std::size_t i, const Vec& x) { return dist_to_region(x, sols[i]).distance; });
  if (dist_to_region(aq.xbar, f.solution_set(aq.pbar, aq.ybar, grids.x)).distance > 1e-9) {
    c.meta.notes.push_back("xbar is not in G(pbar)");
  }
  return c;
}

ComposedAubin compose_rate(const SetValuedMap& f, const Certificate& subreg, const Certificate& recede,
                           const Vec& pbar, const Vec& xbar, const Vec& ybar, const ScanGrids& grids) {
  if (!subreg.holds() || !recede.holds()) throw InputError("compose_rate: both premise certificates must HOLD");
  const auto l = recede.meta.get("l");
  if (!l) throw InputError("compose_rate: the recede certificate does not record its rate l");
  const double alpha = subreg.meta.alpha;
  const double mu_prime = alpha * subreg.meta.mu / *l;
  auto same = [](double a, double b) { return a == b || std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
  if (!same(recede.meta.mu, mu_prime)) {
    throw InputError("compose_rate: the recede certificate must use mu' = alpha*mu/l = " + std::to_string(mu_prime));
  }
  if (!same(recede.meta.eta, subreg.meta.eta) || !same(recede.meta.delta, subreg.meta.delta)) {
    throw InputError("compose_rate: both certificates must share eta and delta");
  }
  ComposedAubin out;
  out.claim = AubinQuery{pbar, xbar, ybar, *l / alpha, to_extent(subreg.meta.eta), to_extent(subreg.meta.delta),
                         to_extent(mu_prime)};
  out.validation = check_aubin(f, out.claim, grids);
  out.validation.meta.notes.push_back("claimed by composition: rate l/alpha with mu' = alpha*mu/l");
  return out;
}

Prop58Condition parse_prop58_condition(const std::string& name) {
  if (name == "slope") return Prop58Condition::Slope;
  if (name == "normal-cone-convex") return Prop58Condition::NormalConeConvex;
  if (name == "normal-cone-frechet") return Prop58Condition::NormalConeFrechet;
  if (name == "coderiv-clarke") return Prop58Condition::CoderivClarke;
  if (name == "coderiv-frechet") return Prop58Condition::CoderivFrechet;
  throw InputError("unknown prop58 condition '" + name + "'");
}

std::string to_string(Prop58Condition c) {
  switch (c) {
    case Prop58Condition::Slope: return "slope";
    case Prop58Condition::NormalConeConvex: return "normal-cone-convex";
    case Prop58Condition::NormalConeFrechet: return "normal-cone-frechet";
    case Prop58Condition::CoderivClarke: return "coderiv-clarke";
    case Prop58Condition::CoderivFrechet: return "coderiv-frechet";
  }
  return "?";
}

Prop58Result run_prop58_pipeline(const SetValuedMap& f, const RegularityQuery& q, double l, double l_prime,
                                 Prop58Condition condition, const ScanGrids& grids,
                                 std::optional<double> coderivative_eta) {
  require_metric(f, "prop58 pipeline");
  if (!(l > 0) || !(l_prime > 0) || !std::isfinite(l) || !std::isfinite(l_prime)) {
    throw InputError("prop58 pipeline: l and l' must be positive and finite");
  }
  if (!q.pbar) throw InputError("prop58 pipeline: pbar is required");
  Prop58Result out;
  out.recede = check_recede(f, q, l_prime, grids);

  const ScanSetup base = prepare_scan(f, q, grids);
  RegularityQuery sub = q;
  sub.alpha = l_prime / l;
  sub.mu = Extent(l * base.mu);
  sub.delta = Extent(base.delta);
  const CheckOptions opt{Mode::Sufficient, base.delta + base.mu};
  const double eta_c = coderivative_eta.value_or(base.eta);
  switch (condition) {
    case Prop58Condition::Slope: out.condition = check_corollary_C22(f, sub, grids, opt); break;
    case Prop58Condition::NormalConeConvex: out.condition = check_T2(f, sub, grids, opt, T2Variant::ConvexNormal); break;
    case Prop58Condition::NormalConeFrechet: out.condition = check_T2(f, sub, grids, opt, T2Variant::FrechetCap); break;
    case Prop58Condition::CoderivClarke:
      out.condition = check_C33_C34(f, sub, grids, CoderivativeForm::Ball, eta_c, opt, ConeKind::Clarke);
      break;
    case Prop58Condition::CoderivFrechet:
      out.condition = check_C33_C34(f, sub, grids, CoderivativeForm::Ball, eta_c, opt, ConeKind::Frechet);
      break;
  }
  out.mu_prime = sub.alpha * (l * base.mu) / l_prime;

  Certificate& sum = out.summary;
  sum.check = "prop58";
  sum.meta = base.meta;
  sum.meta.threshold = sub.alpha;
  sum.meta.set("l", l);
  sum.meta.set("l_prime", l_prime);
  sum.meta.set("mu", base.mu);
  sum.meta.set("mu_prime", out.mu_prime);
  sum.meta.notes.push_back("condition=" + to_string(condition));
  sum.meta.sampled = out.recede.meta.sampled || out.condition.meta.sampled;
  if (out.recede.violated() || out.condition.violated()) {
    const Certificate& bad = out.recede.violated() ? out.recede : out.condition;
    sum.verdict = Verdict::Violated;
    sum.margin = bad.margin;
    sum.witness = bad.witness;
    sum.failed = bad.check + ": " + bad.failed;
    return out;
  }
  if (!out.recede.holds() || !out.condition.holds()) {
    sum.verdict = Verdict::Inconclusive;
    sum.meta.notes.push_back("a premise is inconclusive");
    return out;
  }
  out.aubin = check_aubin(f, AubinQuery{*q.pbar, q.xbar, q.ybar, l, q.eta, q.delta, q.mu}, grids);
  sum.verdict = out.aubin->verdict;
  sum.margin = out.aubin->margin;
  sum.witness = out.aubin->witness;
  sum.failed = out.aubin->failed;
  sum.meta.scanned = out.aubin->meta.scanned;
  return out;
}

}  // namespace regulab
