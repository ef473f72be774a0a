#include "regulab/mappings.hpp"

#include <cmath>
#include <sstream>

#include "regulab/errors.hpp"

namespace regulab {

ParameterCarrier ParameterCarrier::normed(int dimension) {
  if (dimension < 0) throw InputError("parameter space dimension must be nonnegative");
  return ParameterCarrier{Kind::Normed, dimension, 1};
}

ParameterCarrier ParameterCarrier::finite(int count) {
  if (count < 1) throw InputError("a finite parameter set needs at least one label");
  return ParameterCarrier{Kind::Labels, 0, count};
}

void ParameterCarrier::check(const Vec& p) const {
  if (p.size() != value_size()) throw InputError("parameter value has the wrong size");
  if (kind == Kind::Labels) {
    const double l = p[0];
    if (l != std::floor(l) || l < 0 || l >= labels) throw InputError("parameter label out of range");
  }
}

SetValuedMap SetValuedMap::polyhedral(ParameterCarrier carrier, int xdim, int ydim,
                                      std::vector<std::vector<GraphPiece>> pieces) {
  if (xdim < 1 || ydim < 1) throw InputError("mapping spaces must have positive dimension");
  const std::size_t expected = carrier.kind == ParameterCarrier::Kind::Labels ? carrier.labels : 1;
  if (pieces.size() != expected) throw InputError("polyhedral graph: one piece list per label is required");
  const int bcols = carrier.kind == ParameterCarrier::Kind::Normed ? carrier.dim : 0;
  for (auto& list : pieces) {
    for (auto& piece : list) {
      if (piece.A.cols() != xdim + ydim) throw InputError("polyhedral graph: A must have dim X + dim Y columns");
      if (piece.b.size() != piece.A.rows()) throw InputError("polyhedral graph: A and b have different row counts");
      if (piece.B.size() == 0) piece.B = Mat::Zero(piece.A.rows(), bcols);
      if (piece.B.rows() != piece.A.rows() || piece.B.cols() != bcols) {
        throw InputError("polyhedral graph: B must be rows(A) x dim P");
      }
    }
  }
  SetValuedMap f;
  f.carrier_ = carrier;
  f.xdim_ = xdim;
  f.ydim_ = ydim;
  f.pieces_ = std::move(pieces);
  return f;
}

SetValuedMap SetValuedMap::closed_form(ParameterCarrier carrier, int xdim, int ydim, ClosedFormRule rule) {
  if (xdim < 1 || ydim < 1) throw InputError("mapping spaces must have positive dimension");
  if (!rule.value || !rule.jacobian) throw InputError("closed-form rule needs a value and a Jacobian");
  SetValuedMap f;
  f.carrier_ = carrier;
  f.xdim_ = xdim;
  f.ydim_ = ydim;
  f.rule_ = std::move(rule);
  return f;
}

SetValuedMap SetValuedMap::affine(const Mat& m, const Mat& n, const Vec& c) {
  const int ny = static_cast<int>(m.rows());
  const int nx = static_cast<int>(m.cols());
  if (n.rows() != ny || c.size() != ny) throw InputError("affine map: M, N and c disagree on dim Y");
  // y - M x = N p + c as two inequalities.
  GraphPiece g;
  g.A.resize(2 * ny, nx + ny);
  g.A << -m, Mat::Identity(ny, ny), m, -Mat::Identity(ny, ny);
  g.b.resize(2 * ny);
  g.b << c, -c;
  g.B.resize(2 * ny, n.cols());
  g.B << n, -n;
  return polyhedral(ParameterCarrier::normed(static_cast<int>(n.cols())), nx, ny, {{g}});
}

SetValuedMap SetValuedMap::linear_diff(int dim) {
  return affine(-Mat::Identity(dim, dim), Mat::Identity(dim, dim), Vec::Zero(dim));
}

SetValuedMap SetValuedMap::identity(int dim) { return scaled(dim, 1.0); }

SetValuedMap SetValuedMap::scaled(int dim, double c) {
  return affine(c * Mat::Identity(dim, dim), Mat::Zero(dim, 0), Vec::Zero(dim));
}

SetValuedMap SetValuedMap::square_diff(double a) {
  if (a == 0.0) throw InputError("square_diff: coefficient must be nonzero");
  ClosedFormRule r;
  r.name = "square_diff";
  r.coefficients = {a};
  r.value = [a](const Vec& p, const Vec& x) {
    Vec y(1);
    y[0] = a * (p[0] - x[0]) * (p[0] - x[0]);
    return y;
  };
  r.jacobian = [a](const Vec& p, const Vec& x) {
    Mat j(1, 1);
    j(0, 0) = 2.0 * a * (x[0] - p[0]);
    return j;
  };
  r.solve = [a](const Vec& p, const Vec& y) {
    std::vector<Vec> out;
    const double s = y[0] / a;
    if (s < 0) return out;
    const double root = std::sqrt(s);
    Vec x(1);
    x[0] = p[0] - root;
    out.push_back(x);
    if (root > 0) {
      x[0] = p[0] + root;
      out.push_back(x);
    }
    return out;
  };
  return closed_form(ParameterCarrier::normed(1), 1, 1, std::move(r));
}

std::string SetValuedMap::describe() const {
  std::ostringstream os;
  if (rule_) {
    os << "closed-form " << rule_->name;
  } else {
    std::size_t count = 0;
    for (const auto& l : pieces_) count += l.size();
    os << "polyhedral graph with " << count << " piece(s)";
  }
  os << ", dim X = " << xdim_ << ", dim Y = " << ydim_;
  if (carrier_.kind == ParameterCarrier::Kind::Labels) {
    os << ", " << carrier_.labels << " parameter label(s)";
  } else {
    os << ", dim P = " << carrier_.dim;
  }
  return os.str();
}

bool SetValuedMap::graph_convex() const {
  if (rule_) return false;
  for (const auto& l : pieces_) {
    if (l.size() != 1) return false;
  }
  return true;
}

bool SetValuedMap::exact() const { return !rule_ || static_cast<bool>(rule_->solve); }

std::vector<Polyhedron> SetValuedMap::pieces_at(const Vec& p) const {
  carrier_.check(p);
  const bool labels = carrier_.kind == ParameterCarrier::Kind::Labels;
  const auto& list = labels ? pieces_[static_cast<std::size_t>(p[0])] : pieces_.front();
  std::vector<Polyhedron> out;
  out.reserve(list.size());
  for (const auto& g : list) {
    Vec rhs = g.b;
    if (!labels && g.B.cols() > 0) rhs += g.B * p;
    out.emplace_back(g.A, rhs);
  }
  return out;
}

RegionSpec SetValuedMap::graph(const Vec& p) const {
  if (!rule_) return RegionSpec(PolyUnion{xdim_ + ydim_, pieces_at(p)});
  carrier_.check(p);
  Sampler s;
  s.dim = xdim_ + ydim_;
  s.label = rule_->name;
  const auto value = rule_->value;
  s.lift = [value, p](const Vec& x) { return std::vector<Vec>{concat(x, value(p, x))}; };
  return RegionSpec(std::move(s));
}

bool SetValuedMap::in_graph(const Vec& p, const Vec& x, const Vec& y, double tol) const {
  if (rule_) {
    carrier_.check(p);
    return (rule_->value(p, x) - y).norm() <= tol * std::max(1.0, y.norm());
  }
  const Vec z = concat(x, y);
  for (const auto& q : pieces_at(p)) {
    if (q.contains(z, tol)) return true;
  }
  return false;
}

RegionSpec SetValuedMap::eval(const Vec& p, const Vec& x) const {
  if (x.size() != xdim_) throw InputError("eval: x has the wrong dimension");
  if (rule_) {
    carrier_.check(p);
    return RegionSpec(PointCloud(ydim_, {rule_->value(p, x)}));
  }
  PolyUnion u{ydim_, {}};
  for (const auto& q : pieces_at(p)) {
    u.pieces.emplace_back(q.A.rightCols(ydim_), q.b - q.A.leftCols(xdim_) * x);
  }
  return RegionSpec(std::move(u));
}

Projection SetValuedMap::nearest_value(const Vec& p, const Vec& x, const Vec& ybar) const {
  return dist_to_region(ybar, eval(p, x));
}

double SetValuedMap::residual(const Vec& p, const Vec& x, const Vec& ybar) const {
  return nearest_value(p, x, ybar).distance;
}

RegionSpec SetValuedMap::solution_set(const Vec& p, const Vec& ybar, const std::optional<GridSpec>& search_grid,
                                      std::optional<double> slice_tol, bool* exact_out) const {
  if (ybar.size() != ydim_) throw InputError("solution_set: ybar has the wrong dimension");
  if (exact_out) *exact_out = true;
  if (!rule_) {
    PolyUnion u{xdim_, {}};
    for (const auto& q : pieces_at(p)) {
      u.pieces.emplace_back(q.A.leftCols(xdim_), q.b - q.A.rightCols(ydim_) * ybar);
    }
    return RegionSpec(std::move(u));
  }
  carrier_.check(p);
  if (rule_->solve) return RegionSpec(PointCloud(xdim_, rule_->solve(p, ybar)));
  if (!search_grid) throw InputError("solution_set: closed-form rule without a solver needs a search grid");
  if (exact_out) *exact_out = false;
  const double tol = slice_tol.value_or(0.5 * search_grid->max_spacing());
  std::vector<Vec> pts;
  for (const auto& x : make_grid(*search_grid)) {
    if ((rule_->value(p, x) - ybar).norm() <= tol) pts.push_back(x);
  }
  return RegionSpec(PointCloud(xdim_, std::move(pts)));
}

Projection SetValuedMap::dist_to_solutions(const Vec& p, const Vec& x, const Vec& ybar,
                                           const std::optional<GridSpec>& search_grid) const {
  return dist_to_region(x, solution_set(p, ybar, search_grid));
}

ConeRep SetValuedMap::graph_normal_cone(const Vec& p, const Vec& x, const Vec& y, const NormalConeOptions& opt) const {
  if (!rule_) return normal_cone_at(graph(p), concat(x, y), opt);
  if (!in_graph(p, x, y, opt.act_tol)) return ConeRep::empty_cone(xdim_ + ydim_);
  const Mat j = rule_->jacobian(p, x);
  ConeRep c = ConeRep::zero(xdim_ + ydim_);
  for (int i = 0; i < ydim_; ++i) {
    const Vec w = Vec::Unit(ydim_, i);
    c.lineality.push_back(concat(j.transpose() * w, -w));
  }
  return c;
}

std::vector<ConeRep> SetValuedMap::graph_tangent_cones(const Vec& p, const Vec& x, const Vec& y,
                                                       double act_tol) const {
  std::vector<ConeRep> out;
  if (rule_) {
    if (!in_graph(p, x, y, act_tol)) return out;
    const Mat j = rule_->jacobian(p, x);
    ConeRep t = ConeRep::zero(xdim_ + ydim_);
    for (int i = 0; i < xdim_; ++i) {
      const Vec e = Vec::Unit(xdim_, i);
      t.lineality.push_back(concat(e, j * e));
    }
    out.push_back(std::move(t));
    return out;
  }
  const Vec z = concat(x, y);
  for (const auto& q : pieces_at(p)) {
    if (q.contains(z, act_tol)) out.push_back(cone_from_inequalities(active_rows(q, z, act_tol), xdim_ + ydim_));
  }
  return out;
}

SetValuedMap SetValuedMap::hat_reduction() const {
  if (carrier_.kind == ParameterCarrier::Kind::Labels && carrier_.labels > 1) {
    throw InputError("hat_reduction: label parameter sets are only supported as singletons");
  }
  const int pdim = carrier_.kind == ParameterCarrier::Kind::Normed ? carrier_.dim : 0;
  const int ny = ydim_;
  const ParameterCarrier hat = ParameterCarrier::normed(pdim + ny);
  if (!rule_) {
    std::vector<GraphPiece> list;
    for (const auto& g : pieces_.front()) {
      GraphPiece h;
      h.A = g.A;
      h.b = g.b;
      h.B.resize(g.A.rows(), pdim + ny);
      if (g.B.cols() > 0) {
        h.B.leftCols(pdim) = g.B;
      }
      h.B.rightCols(ny) = -g.A.rightCols(ny);
      list.push_back(std::move(h));
    }
    return polyhedral(hat, xdim_, ydim_, {std::move(list)});
  }
  const ClosedFormRule base = *rule_;
  const bool labels = carrier_.kind == ParameterCarrier::Kind::Labels;
  auto split = [pdim, labels](const Vec& q) -> Vec {
    if (labels) return Vec::Zero(1);
    return q.head(pdim);
  };
  ClosedFormRule r;
  r.name = base.name + "_hat";
  r.coefficients = base.coefficients;
  r.value = [base, split, ny](const Vec& q, const Vec& x) { return Vec(base.value(split(q), x) - q.tail(ny)); };
  r.jacobian = [base, split](const Vec& q, const Vec& x) { return base.jacobian(split(q), x); };
  if (base.solve) {
    r.solve = [base, split, ny](const Vec& q, const Vec& y) { return base.solve(split(q), Vec(y + q.tail(ny))); };
  }
  return closed_form(hat, xdim_, ydim_, std::move(r));
}

void RegularityQuery::validate(const SetValuedMap& f) const {
  if (xbar.size() != f.xdim()) throw InputError("query: xbar has the wrong dimension");
  if (ybar.size() != f.ydim()) throw InputError("query: ybar has the wrong dimension");
  if (pbar) f.carrier().check(*pbar);
  if (!(alpha > 0) || !std::isfinite(alpha)) throw InputError("query: alpha must be positive and finite");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InputError("query: gamma must be positive and finite");
  if (!(tau > 0 && tau < 1)) throw InputError("query: tau must lie in ]0, 1[");
  for (const Extent* e : {&delta, &mu, &eta}) {
    if (!e->is_unbounded() && !(e->value() > 0)) throw InputError("query: delta, mu and eta must be positive");
  }
}

}  // namespace regulab
