#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "regulab/errors.hpp"
#include "regulab/sets.hpp"

namespace regulab {
namespace {

// Lawson-Hanson active-set NNLS: argmin |C l - d| subject to l >= 0.
Vec nnls(const Mat& c, const Vec& d) {
  const int n = static_cast<int>(c.cols());
  Vec x = Vec::Zero(n);
  if (n == 0) return x;
  std::vector<char> passive(n, 0);
  const double tol = 1e-12 * (1.0 + c.norm() * (1.0 + d.norm()));
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    const Vec w = c.transpose() * (d - c * x);
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = 1;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<int> p;
      for (int j = 0; j < n; ++j) {
        if (passive[j]) p.push_back(j);
      }
      Mat cp(c.rows(), static_cast<int>(p.size()));
      for (int k = 0; k < static_cast<int>(p.size()); ++k) cp.col(k) = c.col(p[k]);
      const Vec zp = Eigen::CompleteOrthogonalDecomposition<Mat>(cp).solve(d);
      Vec z = Vec::Zero(n);
      for (int k = 0; k < static_cast<int>(p.size()); ++k) z[p[k]] = zp[k];
      bool feasible = true;
      for (int j : p) feasible = feasible && z[j] > 0;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int j : p) {
        if (z[j] <= 0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      }
      x += alpha * (z - x);
      for (int j : p) {
        if (x[j] <= 1e-15) {
          x[j] = 0.0;
          passive[j] = 0;
        }
      }
    }
  }
  return x;
}

Mat orthonormal_basis(const std::vector<Vec>& vs, int dim) {
  if (vs.empty()) return Mat::Zero(dim, 0);
  Mat m(dim, static_cast<int>(vs.size()));
  for (int i = 0; i < static_cast<int>(vs.size()); ++i) m.col(i) = vs[i];
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  int rank = 0;
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-10 * std::max(1.0, smax)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

bool rays_equal(const Vec& a, const Vec& b) { return (a - b).norm() <= 1e-9; }

}  // namespace

Vec ConeRep::project(const Vec& v) const {
  if (v.size() != dim) throw InputError("cone: dimension mismatch");
  if (empty) throw InputError("cone: projection onto the empty cone");
  const Mat q = orthonormal_basis(lineality, dim);
  const Vec v_lin = q * (q.transpose() * v);
  const Vec rest = v - v_lin;
  if (generators.empty()) return v_lin;
  Mat g(dim, static_cast<int>(generators.size()));
  for (int i = 0; i < static_cast<int>(generators.size()); ++i) {
    g.col(i) = generators[i] - q * (q.transpose() * generators[i]);
  }
  const Vec lambda = nnls(g, rest);
  return v_lin + g * lambda;
}

double ConeRep::distance(const Vec& v) const {
  if (empty) return kInf;
  return (v - project(v)).norm();
}

bool ConeRep::contains(const Vec& v, double tol) const {
  if (empty) return false;
  return distance(v) <= tol * std::max(1.0, v.norm());
}

ConeRep cone_from_inequalities(const Mat& h_in, int dim) {
  if (h_in.cols() != dim) throw InputError("cone_from_inequalities: dimension mismatch");
  std::vector<Vec> rows;
  for (int i = 0; i < h_in.rows(); ++i) {
    const double n = h_in.row(i).norm();
    if (n > 1e-14) rows.push_back(h_in.row(i).transpose() / n);
  }
  ConeRep out;
  out.dim = dim;
  const Mat row_space = orthonormal_basis(rows, dim);
  const int k = static_cast<int>(row_space.cols());
  // lineality = orthogonal complement of the row space
  {
    Mat full = Mat::Identity(dim, dim);
    if (k > 0) full -= row_space * row_space.transpose();
    const Mat lin = orthonormal_basis([&] {
      std::vector<Vec> cols;
      for (int j = 0; j < dim; ++j) cols.push_back(full.col(j));
      return cols;
    }(), dim);
    for (int j = 0; j < lin.cols(); ++j) out.lineality.push_back(lin.col(j));
  }
  if (k == 0) return out;

  const int m = static_cast<int>(rows.size());
  Mat hr(m, k);
  for (int i = 0; i < m; ++i) hr.row(i) = (row_space.transpose() * rows[i]).transpose();

  const int choose = k - 1;
  double combos = 1.0;
  for (int i = 0; i < choose; ++i) combos = combos * (m - i) / (i + 1);
  if (combos > 2e5) {
    throw ResourceError("cone_from_inequalities: too many candidate ray subsets", static_cast<std::size_t>(combos));
  }

  std::vector<int> subset(choose);
  std::iota(subset.begin(), subset.end(), 0);
  auto try_subset = [&]() {
    Vec r;
    if (choose == 0) {
      r = Vec::Ones(1);
    } else {
      Mat s(choose, k);
      for (int i = 0; i < choose; ++i) s.row(i) = hr.row(subset[i]);
      Eigen::JacobiSVD<Mat> svd(s, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1e-10) ++rank;
      }
      if (rank != k - 1) return;
      r = svd.matrixV().col(k - 1);
    }
    for (double sign : {1.0, -1.0}) {
      const Vec cand = sign * r;
      if ((hr * cand).maxCoeff() <= 1e-10) {
        const Vec ray = (row_space * cand).normalized();
        const bool dup = std::any_of(out.generators.begin(), out.generators.end(),
                                     [&](const Vec& g) { return rays_equal(g, ray); });
        if (!dup) out.generators.push_back(ray);
      }
    }
  };
  if (choose == 0) {
    try_subset();
  } else if (choose <= m) {
    while (true) {
      try_subset();
      int i = choose - 1;
      while (i >= 0 && subset[i] == m - choose + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < choose; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return out;
}

Mat active_rows(const Polyhedron& q, const Vec& x, double act_tol) {
  std::vector<int> idx;
  for (int i = 0; i < q.rows(); ++i) {
    const double scale = std::max(1.0, q.A.row(i).norm());
    if (std::abs(q.A.row(i).dot(x) - q.b[i]) <= act_tol * scale && q.A.row(i).norm() > 1e-14) idx.push_back(i);
  }
  Mat out(static_cast<int>(idx.size()), q.dim());
  for (int k = 0; k < static_cast<int>(idx.size()); ++k) out.row(k) = q.A.row(idx[k]);
  return out;
}

namespace {

ConeRep polyhedron_normal_cone(const Polyhedron& q, const Vec& x, double act_tol) {
  const Mat act = active_rows(q, x, act_tol);
  ConeRep out = ConeRep::zero(q.dim());
  std::vector<Vec> gens;
  for (int i = 0; i < act.rows(); ++i) gens.push_back(act.row(i).transpose().normalized());
  std::vector<char> paired(gens.size(), 0);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size() && !paired[i]; ++j) {
      if (!paired[j] && gens[i].dot(gens[j]) < -1.0 + 1e-12) {
        paired[i] = paired[j] = 1;
        out.lineality.push_back(gens[i]);
      }
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (paired[i]) continue;
    const bool dup = std::any_of(out.generators.begin(), out.generators.end(),
                                 [&](const Vec& g) { return rays_equal(g, gens[i]); });
    if (!dup) out.generators.push_back(gens[i]);
  }
  return out;
}

// Normal cone from a set of tangent cones: {x* : <x*, d> <= 0 for all d in T_i}.
ConeRep polar_of_union(const std::vector<ConeRep>& tangents, int dim) {
  std::vector<Vec> rows;
  for (const auto& t : tangents) {
    for (const auto& g : t.generators) rows.push_back(g);
    for (const auto& l : t.lineality) {
      rows.push_back(l);
      rows.push_back(-l);
    }
  }
  Mat h(static_cast<int>(rows.size()), dim);
  for (int i = 0; i < h.rows(); ++i) h.row(i) = rows[i].transpose();
  return cone_from_inequalities(h, dim);
}

}  // namespace

ConeRep normal_cone_at(const RegionSpec& s, const Vec& x, const NormalConeOptions& opt) {
  if (x.size() != s.dim()) throw InputError("normal_cone_at: dimension mismatch");
  const int n = s.dim();
  if (s.is_poly()) {
    std::vector<const Polyhedron*> containing;
    for (const auto& piece : s.poly().pieces) {
      if (piece.contains(x, opt.act_tol)) containing.push_back(&piece);
    }
    if (containing.empty()) return ConeRep::empty_cone(n);
    if (containing.size() == 1) return polyhedron_normal_cone(*containing.front(), x, opt.act_tol);
    std::vector<ConeRep> tangents;
    for (const auto* piece : containing) {
      tangents.push_back(cone_from_inequalities(active_rows(*piece, x, opt.act_tol), n));
    }
    return polar_of_union(tangents, n);
  }

  const PointCloud cloud = s.is_cloud() ? s.cloud() : s.sampler().materialize();
  const bool member = std::any_of(cloud.points.begin(), cloud.points.end(), [&](const Vec& p) {
    return (p - x).lpNorm<Eigen::Infinity>() <= std::max(opt.act_tol, 1e-12);
  });
  if (!member) {
    ConeRep c = ConeRep::empty_cone(n);
    c.sampled = true;
    return c;
  }
  std::vector<std::pair<double, Vec>> near;
  for (const auto& p : cloud.points) {
    const double d = (p - x).norm();
    if (d > 1e-12 && d <= opt.cloud_radius) near.emplace_back(d, (p - x) / d);
  }
  std::stable_sort(near.begin(), near.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (near.size() > 64) near.resize(64);
  ConeRep t = ConeRep::zero(n);
  for (const auto& [d, dir] : near) {
    const bool dup = std::any_of(t.generators.begin(), t.generators.end(),
                                 [&](const Vec& g) { return g.dot(dir) > 1.0 - 1e-6; });
    if (!dup) t.generators.push_back(dir);
  }
  ConeRep out = polar_of_union({t}, n);
  out.sampled = true;
  return out;
}

}  // namespace regulab
