#include "regulab/convex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "regulab/errors.hpp"

namespace regulab {
namespace {

Mat stack_columns(const std::vector<Vec>& cols, int rows) {
  Mat m(rows, static_cast<int>(cols.size()));
  for (int i = 0; i < static_cast<int>(cols.size()); ++i) m.col(i) = cols[i];
  return m;
}

Mat orthonormal_columns(const Mat& m, double rel_tol = 1e-10) {
  if (m.cols() == 0) return Mat::Zero(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * std::max(1.0, smax)) ++r;
  }
  return svd.matrixU().leftCols(r);
}

Mat null_basis(const Mat& a) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-12 * std::max(1.0, smax)) ++r;
  }
  return svd.matrixV().rightCols(n - r);
}

Vec lstsq(const Mat& a, const Vec& b) {
  if (a.cols() == 0) return Vec::Zero(0);
  return Eigen::CompleteOrthogonalDecomposition<Mat>(a).solve(b);
}

struct FaceProblem {
  const Mat& A;
  const Mat& B;
  const Vec& a;
  const Vec& b;
  double wx;
  double wy;

  double eval(const Vec& w) const {
    double v = 0.0;
    if (wx > 0) v += wx * (a - A * w).norm();
    if (wy > 0) v += wy * (b - B * w).norm();
    return v;
  }
};

// Lexicographic least squares: minimize |p - P w| first, then |q - Q w| on
// the minimizer set of the first problem.
Vec lexicographic(const Mat& p, const Vec& pv, const Mat& q, const Vec& qv) {
  const Vec w0 = lstsq(p, pv);
  const Mat n = null_basis(p);
  if (n.cols() == 0) return w0;
  const Vec z = lstsq(q * n, qv - q * w0);
  return w0 + n * z;
}

// Damped Newton on the smooth part of |a - A w| wx + |b - B w| wy.
Vec newton(const FaceProblem& fp, Vec w) {
  const int n = static_cast<int>(w.size());
  double f = fp.eval(w);
  double damping = 1e-12;
  for (int it = 0; it < 200; ++it) {
    const Vec r1 = fp.a - fp.A * w;
    const Vec r2 = fp.b - fp.B * w;
    const double n1 = r1.norm();
    const double n2 = r2.norm();
    if (n1 < 1e-14 || n2 < 1e-14) break;
    const Vec u1 = r1 / n1;
    const Vec u2 = r2 / n2;
    const Vec g = -fp.wx * (fp.A.transpose() * u1) - fp.wy * (fp.B.transpose() * u2);
    if (g.norm() < 1e-15) break;
    const Mat p1 = Mat::Identity(r1.size(), r1.size()) - u1 * u1.transpose();
    const Mat p2 = Mat::Identity(r2.size(), r2.size()) - u2 * u2.transpose();
    Mat h = fp.wx / n1 * (fp.A.transpose() * p1 * fp.A) + fp.wy / n2 * (fp.B.transpose() * p2 * fp.B);
    const double scale = std::max({1e-300, h.diagonal().cwiseAbs().maxCoeff(), 1e-8 * g.norm() / (1.0 + w.norm())});
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      const Mat hr = h + damping * scale * Mat::Identity(n, n) + 1e-300 * Mat::Identity(n, n);
      Vec step = -hr.ldlt().solve(g);
      if (!step.allFinite()) step = -g;
      double t = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        const Vec cand = w + t * step;
        const double fc = fp.eval(cand);
        if (fc < f - 1e-16 * (1.0 + f)) {
          w = cand;
          f = fc;
          improved = true;
          break;
        }
        t *= 0.5;
      }
      if (improved) {
        damping = std::max(1e-14, damping * 0.1);
      } else {
        damping *= 100.0;
      }
    }
    if (!improved) break;
  }
  return w;
}

// First-order optimality of the unconstrained face problem at w, including
// the kinks where one residual vanishes.
bool face_optimal(const FaceProblem& fp, const Vec& w) {
  const Vec r1 = fp.a - fp.A * w;
  const Vec r2 = fp.b - fp.B * w;
  const double n1 = r1.norm();
  const double n2 = r2.norm();
  const double s1 = 1e-12 * (1.0 + fp.a.norm());
  const double s2 = 1e-12 * (1.0 + fp.b.norm());
  const bool kink1 = fp.wx == 0.0 || n1 <= s1;
  const bool kink2 = fp.wy == 0.0 || n2 <= s2;
  if (kink1 && kink2) return true;
  const double tol = 1e-10 * (1.0 + fp.wx * fp.A.norm() + fp.wy * fp.B.norm());
  if (!kink1 && !kink2) {
    return (fp.wx * (fp.A.transpose() * r1) / n1 + fp.wy * (fp.B.transpose() * r2) / n2).norm() <= tol;
  }
  // One term is smooth with gradient -w_s M_s^T u_s; the other must absorb it
  // with a subgradient w_k M_k^T s, |s| <= 1.
  const Mat& mk = kink1 ? fp.A : fp.B;
  const double wk = kink1 ? fp.wx : fp.wy;
  if (wk == 0.0) return false;
  const Vec c = kink1 ? Vec(fp.wy * (fp.B.transpose() * r2) / n2 / wk) : Vec(fp.wx * (fp.A.transpose() * r1) / n1 / wk);
  const Mat mt = mk.transpose();
  const Vec sv = lstsq(mt, c);
  return (mt * sv - c).norm() <= tol && sv.norm() <= 1.0 + 1e-12;
}

}  // namespace

WeightedConeDistance weighted_cone_distance(const Vec& a, const Vec& b, const ConeRep& k, double wx, double wy) {
  const int nx = static_cast<int>(a.size());
  const int ny = static_cast<int>(b.size());
  const int n = nx + ny;
  if (k.dim != n) throw InputError("weighted_cone_distance: cone dimension does not match the point");
  if (wx < 0 || wy < 0) throw InputError("weighted_cone_distance: negative weight");
  WeightedConeDistance best;
  if (k.empty) return best;

  const Mat lin = orthonormal_columns(stack_columns(k.lineality, n));
  const int nl = static_cast<int>(lin.cols());
  std::vector<Vec> gens;
  for (const auto& g : k.generators) {
    const Vec gp = g - lin * (lin.transpose() * g);
    if (gp.norm() > 1e-12) gens.push_back(g);
  }
  const int m = static_cast<int>(gens.size());
  if (m > 24) throw ResourceError("weighted_cone_distance: too many cone generators", static_cast<std::size_t>(m));
  const int max_face = std::min(m, n - nl);

  auto consider = [&](const Mat& w_full, const Vec& w, int face_size) {
    Vec ww = w;
    for (int i = 0; i < face_size; ++i) ww[i] = std::max(0.0, ww[i]);
    const Vec kv = w_full * ww;
    const double v = wx * (a - kv.head(nx)).norm() + wy * (b - kv.tail(ny)).norm();
    if (v < best.value) {
      best.value = v;
      best.kx = kv.head(nx);
      best.ky = kv.tail(ny);
    }
  };

  std::vector<int> face;
  const std::uint64_t limit = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    const int size = static_cast<int>(__builtin_popcountll(mask));
    if (size > max_face) continue;
    face.clear();
    for (int i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) face.push_back(i);
    }
    Mat w_full(n, size + nl);
    for (int i = 0; i < size; ++i) w_full.col(i) = gens[face[i]];
    if (nl > 0) w_full.rightCols(nl) = lin;
    if (size > 0) {
      Eigen::ColPivHouseholderQR<Mat> qr(w_full);
      qr.setThreshold(1e-10);
      if (qr.rank() < size + nl) continue;
    }
    const Mat wa = w_full.topRows(nx);
    const Mat wb = w_full.bottomRows(ny);
    if (w_full.cols() == 0) {
      consider(w_full, Vec::Zero(0), 0);
      continue;
    }
    const FaceProblem fp{wa, wb, a, b, wx, wy};
    const Vec c1 = lexicographic(wa, a, wb, b);
    const Vec c2 = lexicographic(wb, b, wa, a);
    consider(w_full, c1, size);
    consider(w_full, c2, size);
    Mat stacked(n, w_full.cols());
    stacked << wx * wa, wy * wb;
    Vec rhs(n);
    rhs << wx * a, wy * b;
    const Vec w0 = lstsq(stacked, rhs);
    consider(w_full, w0, size);
    if (wx > 0 && wy > 0 && !face_optimal(fp, c1) && !face_optimal(fp, c2) && !face_optimal(fp, w0)) {
      consider(w_full, newton(fp, w0), size);
    }
  }
  return best;
}

double dual_cone_distance(const Vec& xs, const Vec& ys, const ConeRep& k, double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InputError("dual_cone_distance: gamma must be positive and finite");
  return weighted_cone_distance(xs, ys, k, 1.0, 1.0 / gamma).value;
}

CoderivativeBallDistance coderivative_ball_distance(const ConeRep& k, int xdim, const Vec& ystar, double eta) {
  if (!(eta > 0)) throw InputError("coderivative_ball_distance: eta must be positive");
  CoderivativeBallDistance out;
  const Vec zero_x = Vec::Zero(xdim);
  const Vec target = -ystar;
  if (k.empty) {
    out.vacuous = true;
    return out;
  }
  out.gap = weighted_cone_distance(zero_x, target, k, 0.0, 1.0).value;
  if (out.gap >= eta) {
    out.vacuous = true;
    return out;
  }
  if (std::isinf(eta)) {
    out.value = 0.0;
    return out;
  }
  auto g = [&](double c) { return weighted_cone_distance(zero_x, target, k, 1.0, c).value - c * eta; };
  double hi = 1.0;
  double g_hi = g(hi);
  if (g_hi > 0.0) {
    for (int i = 0; i < 60; ++i) {
      const double g2 = g(2 * hi);
      if (g2 <= g_hi) break;
      hi *= 2;
      g_hi = g2;
    }
    hi *= 2;
  }
  double lo = 0.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = hi - phi * (hi - lo);
  double c2 = lo + phi * (hi - lo);
  double g1 = g(c1);
  double g2 = g(c2);
  double best_c = 0.0;
  double best = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    if (g1 > best) { best = g1; best_c = c1; }
    if (g2 > best) { best = g2; best_c = c2; }
    if (g1 < g2) {
      lo = c1;
      c1 = c2;
      g1 = g2;
      c2 = lo + phi * (hi - lo);
      g2 = g(c2);
    } else {
      hi = c2;
      c2 = c1;
      g2 = g1;
      c1 = hi - phi * (hi - lo);
      g1 = g(c1);
    }
  }
  if (g1 > best) { best = g1; best_c = c1; }
  if (g2 > best) { best = g2; best_c = c2; }
  out.value = std::max(0.0, best);
  out.multiplier = best_c;
  return out;
}

TangentDirection best_tangent_direction(const Mat& h, int xdim, const Vec& cy, double gamma) {
  const int n = static_cast<int>(h.cols());
  return best_tangent_direction(cone_from_inequalities(h, n), xdim, cy, gamma);
}

TangentDirection best_tangent_direction(const ConeRep& t, int xdim, const Vec& cy, double gamma) {
  const int n = t.dim;
  const int ny = n - xdim;
  if (cy.size() != ny) throw InputError("best_tangent_direction: objective dimension mismatch");
  if (!(gamma > 0)) throw InputError("best_tangent_direction: gamma must be positive");
  TangentDirection out{Vec::Zero(xdim), Vec::Zero(ny), 0.0};
  if (t.empty) return out;

  std::vector<Vec> span = t.generators;
  span.insert(span.end(), t.lineality.begin(), t.lineality.end());
  const Mat q = orthonormal_columns(stack_columns(span, n));
  const int k = static_cast<int>(q.cols());
  if (k == 0) return out;

  // Work in coordinates z of span(q), where the cone has nonempty interior.
  const ConeRep tz = [&] {
    ConeRep c;
    c.dim = k;
    for (const auto& g : t.generators) c.generators.push_back(q.transpose() * g);
    for (const auto& l : t.lineality) c.lineality.push_back(q.transpose() * l);
    return c;
  }();
  // Facet normals of the reduced cone: rays of the polar cone.
  Mat rows;
  {
    std::vector<Vec> polar_rows;
    for (const auto& g : tz.generators) polar_rows.push_back(g);
    for (const auto& l : tz.lineality) {
      polar_rows.push_back(l);
      polar_rows.push_back(-l);
    }
    Mat hp(static_cast<int>(polar_rows.size()), k);
    for (int i = 0; i < hp.rows(); ++i) hp.row(i) = polar_rows[i].transpose();
    const ConeRep polar = cone_from_inequalities(hp, k);
    rows.resize(static_cast<int>(polar.generators.size()), k);
    for (int i = 0; i < rows.rows(); ++i) rows.row(i) = polar.generators[i].transpose();
  }

  const Mat qx = q.topRows(xdim);
  const Mat qy = q.bottomRows(ny);
  const Vec obj = qy.transpose() * cy;
  const double ry2 = 1.0 / (gamma * gamma);

  Vec z = Vec::Zero(k);
  for (const auto& g : tz.generators) z += g.normalized();
  {
    const double sx = (qx * z).norm();
    const double sy = (qy * z).norm();
    double s = 1.0;
    if (sx > 0) s = std::min(s, 0.5 / sx);
    if (sy > 0) s = std::min(s, 0.5 / (gamma * sy));
    z *= s;
  }

  auto barrier = [&](const Vec& zz, double tt, Vec* grad, Mat* hess) -> double {
    const Vec dx = qx * zz;
    const Vec dy = qy * zz;
    const double sx = 1.0 - dx.squaredNorm();
    const double sy = ry2 - dy.squaredNorm();
    if (sx <= 0 || sy <= 0) return kInf;
    double f = -tt * obj.dot(zz) - std::log(sx) - std::log(sy);
    Vec s(rows.rows());
    for (int i = 0; i < rows.rows(); ++i) {
      s[i] = -rows.row(i).dot(zz);
      if (s[i] <= 0) return kInf;
      f -= std::log(s[i]);
    }
    if (grad) {
      Vec gr = -tt * obj + 2.0 * qx.transpose() * dx / sx + 2.0 * qy.transpose() * dy / sy;
      for (int i = 0; i < rows.rows(); ++i) gr += rows.row(i).transpose() / s[i];
      *grad = gr;
    }
    if (hess) {
      const Vec ax = qx.transpose() * dx;
      const Vec ay = qy.transpose() * dy;
      Mat hs = 2.0 * qx.transpose() * qx / sx + 4.0 * ax * ax.transpose() / (sx * sx) +
               2.0 * qy.transpose() * qy / sy + 4.0 * ay * ay.transpose() / (sy * sy);
      for (int i = 0; i < rows.rows(); ++i) hs += rows.row(i).transpose() * rows.row(i) / (s[i] * s[i]);
      *hess = hs;
    }
    return f;
  };

  for (double tt = 1.0; tt <= 1e12; tt *= 8.0) {
    for (int it = 0; it < 100; ++it) {
      Vec g;
      Mat hs;
      const double f = barrier(z, tt, &g, &hs);
      const Vec step = -hs.ldlt().solve(g);
      const double dec = -g.dot(step);
      if (!(dec > 1e-18)) break;
      double a = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls) {
        const Vec cand = z + a * step;
        const double fc = barrier(cand, tt, nullptr, nullptr);
        if (fc <= f - 0.25 * a * dec) {
          z = cand;
          moved = true;
          break;
        }
        a *= 0.5;
      }
      if (!moved || dec < 1e-14) break;
    }
  }
  out.dx = qx * z;
  out.dy = qy * z;
  out.value = cy.dot(out.dy);
  return out;
}

}  // namespace regulab
