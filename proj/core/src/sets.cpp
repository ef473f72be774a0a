#include "regulab/sets.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "regulab/errors.hpp"

namespace regulab {

Polyhedron::Polyhedron(Mat a, Vec rhs) : A(std::move(a)), b(std::move(rhs)) {
  if (A.rows() != b.size()) throw InputError("polyhedron: A has " + std::to_string(A.rows()) +
                                             " rows but b has " + std::to_string(b.size()) + " entries");
}

bool Polyhedron::contains(const Vec& x, double tol) const {
  if (x.size() != dim()) throw InputError("polyhedron: dimension mismatch");
  for (int i = 0; i < rows(); ++i) {
    const double scale = std::max(1.0, A.row(i).norm());
    if (A.row(i).dot(x) - b[i] > tol * scale) return false;
  }
  return true;
}

bool Polyhedron::is_empty() const {
  try {
    project_polyhedron(Vec::Zero(dim()), *this);
    return false;
  } catch (const EmptinessError&) {
    return true;
  }
}

Polyhedron Polyhedron::box(const Vec& lower, const Vec& upper) {
  const int n = static_cast<int>(lower.size());
  Mat a = Mat::Zero(2 * n, n);
  Vec b(2 * n);
  for (int i = 0; i < n; ++i) {
    a(2 * i, i) = 1.0;
    b[2 * i] = upper[i];
    a(2 * i + 1, i) = -1.0;
    b[2 * i + 1] = -lower[i];
  }
  return {a, b};
}

Polyhedron Polyhedron::whole_space(int dim) { return {Mat::Zero(0, dim), Vec::Zero(0)}; }

PointCloud::PointCloud(int dimension, std::vector<Vec> pts, double dedup_tol) : dim(dimension) {
  // Sort by the first coordinate so that duplicates only need a local window.
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (const auto& p : pts) {
    if (p.size() != dim) throw InputError("point cloud: dimension mismatch");
  }
  if (dim == 0) {
    if (!pts.empty()) points.push_back(pts.front());
    return;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a][0] < pts[b][0]; });
  std::vector<char> keep(pts.size(), 1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    for (std::size_t j = k + 1; j < order.size() && pts[order[j]][0] - pts[i][0] <= dedup_tol; ++j) {
      const auto jj = order[j];
      if (!keep[jj] || !keep[i]) continue;
      if ((pts[jj] - pts[i]).lpNorm<Eigen::Infinity>() <= dedup_tol) keep[std::max(i, jj)] = 0;
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) points.push_back(std::move(pts[i]));
  }
}

PointCloud Sampler::materialize(std::size_t max_points) const {
  if (!grid) throw InputError("sampler '" + label + "' has no attached grid");
  std::vector<Vec> pts;
  for (const auto& g : make_grid(*grid, max_points)) {
    for (auto& p : lift(g)) pts.push_back(std::move(p));
  }
  return PointCloud(dim, std::move(pts));
}

RegionSpec::RegionSpec(Polyhedron p) {
  const int d = p.dim();
  v_ = PolyUnion{d, {std::move(p)}};
}

int RegionSpec::dim() const {
  return std::visit([](const auto& r) { return r.dim; }, v_);
}

bool RegionSpec::known_empty() const {
  if (is_cloud()) return cloud().points.empty();
  if (is_poly()) {
    return std::all_of(poly().pieces.begin(), poly().pieces.end(), [](const Polyhedron& q) { return q.is_empty(); });
  }
  return false;
}

bool RegionSpec::contains(const Vec& x, double tol) const {
  if (is_poly()) {
    return std::any_of(poly().pieces.begin(), poly().pieces.end(),
                       [&](const Polyhedron& q) { return q.contains(x, tol); });
  }
  const PointCloud c = is_cloud() ? cloud() : sampler().materialize();
  return std::any_of(c.points.begin(), c.points.end(),
                     [&](const Vec& p) { return (p - x).lpNorm<Eigen::Infinity>() <= tol; });
}

namespace {

struct NormalizedRows {
  Mat a;
  Vec b;
};

// Drops zero rows (throwing on 0 <= negative) and scales rows to unit norm.
NormalizedRows normalize_rows(const Polyhedron& q) {
  std::vector<int> kept;
  for (int i = 0; i < q.rows(); ++i) {
    const double n = q.A.row(i).norm();
    if (n <= 1e-14) {
      if (q.b[i] < -1e-12) throw EmptinessError("polyhedron has an infeasible zero row");
      continue;
    }
    kept.push_back(i);
  }
  NormalizedRows out{Mat(static_cast<int>(kept.size()), q.dim()), Vec(static_cast<int>(kept.size()))};
  for (int k = 0; k < static_cast<int>(kept.size()); ++k) {
    const double n = q.A.row(kept[k]).norm();
    out.a.row(k) = q.A.row(kept[k]) / n;
    out.b[k] = q.b[kept[k]] / n;
  }
  return out;
}

double max_violation(const Mat& a, const Vec& b, const Vec& z) {
  if (a.rows() == 0) return 0.0;
  return std::max(0.0, (a * z - b).maxCoeff());
}

}  // namespace

// Dual active-set method (Goldfarb-Idnani with identity Hessian). Each outer
// step picks the most violated row and moves along the projection of its
// normal onto the orthogonal complement of the active normals, dropping
// active rows whose multipliers would turn negative. A violated row whose
// normal lies in the active span with no droppable row certifies emptiness.
Vec project_polyhedron(const Vec& x, const Polyhedron& q, double tol, int max_iter) {
  if (x.size() != q.dim()) throw InputError("project_polyhedron: dimension mismatch");
  const NormalizedRows rows = normalize_rows(q);
  const Mat& a = rows.a;
  const Vec& b = rows.b;
  const int m = static_cast<int>(a.rows());
  const int n = q.dim();
  if (m == 0 || max_violation(a, b, x) <= tol) return x;

  Vec z = x;
  std::vector<int> active;
  std::vector<double> u;
  int iterations = 0;
  auto budget = [&] {
    if (++iterations > max_iter) throw NumericError("project_polyhedron: no convergence within iteration cap", z);
  };

  while (true) {
    budget();
    int p = -1;
    double worst = tol;
    for (int i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = a.row(i).dot(z) - b[i];
      if (s > worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) return z;
    double up = 0.0;
    while (true) {
      budget();
      const int k = static_cast<int>(active.size());
      Mat nmat(n, k);
      for (int j = 0; j < k; ++j) nmat.col(j) = a.row(active[j]).transpose();
      const Vec ap = a.row(p).transpose();
      Vec r = Vec::Zero(k);
      Vec d = -ap;
      if (k > 0) {
        const Mat gram = nmat.transpose() * nmat;
        const Vec coeff = gram.ldlt().solve(nmat.transpose() * ap);
        r = -coeff;
        d = -(ap - nmat * coeff);
      }
      const double curvature = d.squaredNorm();
      const double s = ap.dot(z) - b[p];
      double t1 = kInf;
      int block = -1;
      for (int j = 0; j < k; ++j) {
        if (r[j] < -1e-14) {
          const double t = u[j] / -r[j];
          if (t < t1) {
            t1 = t;
            block = j;
          }
        }
      }
      const bool degenerate = curvature <= 1e-20;
      if (degenerate && block < 0) throw EmptinessError("polyhedron is empty (Farkas certificate found)");
      const double t2 = degenerate ? kInf : s / curvature;
      const double t = std::min(t1, t2);
      if (!degenerate) z += t * d;
      for (int j = 0; j < k; ++j) u[j] += t * r[j];
      up += t;
      if (t2 <= t1) {
        active.push_back(p);
        u.push_back(up);
        break;
      }
      active.erase(active.begin() + block);
      u.erase(u.begin() + block);
    }
  }
}

Projection dist_to_region(const Vec& x, const RegionSpec& s) {
  if (x.size() != s.dim()) throw InputError("dist_to_region: dimension mismatch");
  Projection out;
  auto offer = [&](const Vec& p) {
    const double d = (p - x).norm();
    if (d < out.distance) {
      out.distance = d;
      out.nearest = p;
    }
  };
  if (s.is_poly()) {
    for (const auto& piece : s.poly().pieces) {
      try {
        offer(project_polyhedron(x, piece));
      } catch (const EmptinessError&) {
        // empty pieces contribute nothing
      }
    }
    return out;
  }
  const PointCloud cloud = s.is_cloud() ? s.cloud() : s.sampler().materialize();
  for (const auto& p : cloud.points) offer(p);
  return out;
}

NormSubdifferential norm_subdifferential(const Vec& y, const Vec& base) {
  if (y.size() != base.size()) throw InputError("norm_subdifferential: dimension mismatch");
  NormSubdifferential out;
  const Vec diff = y - base;
  const double n = diff.norm();
  if (n == 0.0) {
    out.unit_ball = true;
    out.direction = Vec::Zero(y.size());
  } else {
    out.direction = diff / n;
  }
  return out;
}

}  // namespace regulab
