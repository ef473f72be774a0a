#include "regulab/spaces.hpp"

#include <cmath>
#include <string>

#include "regulab/errors.hpp"

namespace regulab {

NormedSpace::NormedSpace(std::string label, int dimension, NormKind kind)
    : name(std::move(label)), dim(dimension), norm(kind) {
  if (dim < 1) throw InputError("space " + name + ": dimension must be >= 1");
}

double NormedSpace::norm_of(const Vec& v) const {
  if (v.size() != dim) throw InputError("space " + name + ": dimension mismatch");
  return v.norm();
}

double NormedSpace::dist(const Vec& a, const Vec& b) const {
  if (a.size() != dim || b.size() != dim) throw InputError("space " + name + ": dimension mismatch");
  return (a - b).norm();
}

Extent::Extent(double value) : value_(value) {
  if (std::isinf(value) && value > 0) {
    unbounded_ = true;
  } else if (!(value > 0)) {
    throw InputError("extent must be positive or unbounded");
  }
}

double Extent::clamp(double cap, bool& clamped) const {
  if (!unbounded_) return value_;
  clamped = true;
  return cap;
}

GammaMetric::GammaMetric(double gamma) : gamma_(gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InputError("gamma must be a positive finite real");
}

double prod_dist(const Vec& u, const Vec& v, const Vec& x, const Vec& y, const GammaMetric& g) {
  if (u.size() != x.size() || v.size() != y.size()) throw InputError("prod_dist: dimension mismatch");
  return std::max((u - x).norm(), g.gamma() * (v - y).norm());
}

double prod_norm(const Vec& x, const Vec& y, const GammaMetric& g) {
  return std::max(x.norm(), g.gamma() * y.norm());
}

double dual_norm(const Vec& xs, const Vec& ys, const GammaMetric& g) {
  return xs.norm() + ys.norm() / g.gamma();
}

GridSpec::GridSpec(Vec lo, Vec hi, int res) : lower(std::move(lo)), upper(std::move(hi)), resolution(res) {
  validate();
}

void GridSpec::validate() const {
  if (lower.size() != upper.size()) throw InputError("grid: bound dimension mismatch");
  if (resolution < 2) throw InputError("grid: resolution must be >= 2");
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw InputError("grid: lower bound must be < upper bound in every dimension");
  }
}

std::size_t GridSpec::point_count() const {
  std::size_t n = 1;
  for (int i = 0; i < dim(); ++i) {
    const auto r = static_cast<std::size_t>(resolution);
    if (n > std::numeric_limits<std::size_t>::max() / r) return std::numeric_limits<std::size_t>::max();
    n *= r;
  }
  return n;
}

double GridSpec::spacing(int i) const { return (upper[i] - lower[i]) / (resolution - 1); }

double GridSpec::max_spacing() const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s = std::max(s, spacing(i));
  return s;
}

double GridSpec::diameter() const { return (upper - lower).norm(); }

std::vector<Vec> make_grid(const GridSpec& spec, std::size_t max_points) {
  spec.validate();
  const std::size_t count = spec.point_count();
  if (count > max_points) {
    throw ResourceError("grid would contain " + std::to_string(count) + " points (cap " +
                            std::to_string(max_points) + ")",
                        count);
  }
  const int d = spec.dim();
  std::vector<Vec> out;
  out.reserve(count);
  std::vector<int> idx(d, 0);
  for (std::size_t k = 0; k < count; ++k) {
    Vec p(d);
    for (int i = 0; i < d; ++i) {
      // convex combination keeps endpoints and symmetric midpoints exact
      const double t = static_cast<double>(idx[i]) / (spec.resolution - 1);
      p[i] = spec.lower[i] * (1.0 - t) + spec.upper[i] * t;
    }
    out.push_back(std::move(p));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < spec.resolution) break;
      idx[i] = 0;
    }
  }
  return out;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace regulab
