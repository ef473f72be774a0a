#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace regulab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormKind { Euclidean };

/// A finite-dimensional coordinate space with a norm descriptor.
struct NormedSpace {
  std::string name;
  int dim = 1;
  NormKind norm = NormKind::Euclidean;

  NormedSpace() = default;
  NormedSpace(std::string label, int dimension, NormKind kind = NormKind::Euclidean);

  double norm_of(const Vec& v) const;
  double dist(const Vec& a, const Vec& b) const;
  bool contains(const Vec& v) const { return v.size() == dim; }
};

/// Positive radius or an explicit "+infinity" marker.
///
/// Unbounded extents are clamped to a finite value (typically the diameter of
/// the scan box) before a scan starts; `clamp` reports whether that happened.
class Extent {
 public:
  Extent() = default;
  explicit Extent(double value);
  static Extent unbounded() { Extent e; e.unbounded_ = true; e.value_ = kInf; return e; }

  bool is_unbounded() const noexcept { return unbounded_; }
  double value() const noexcept { return value_; }

  /// Finite value to use in a scan bounded by `cap`; sets `clamped` if the
  /// extent was unbounded.
  double clamp(double cap, bool& clamped) const;

 private:
  double value_ = 1.0;
  bool unbounded_ = false;
};

/// The weight `gamma` of the product metric max{|u-x|, gamma |v-y|}.
class GammaMetric {
 public:
  explicit GammaMetric(double gamma);
  double gamma() const noexcept { return gamma_; }

 private:
  double gamma_;
};

/// max{|u-x|, gamma |v-y|}.
double prod_dist(const Vec& u, const Vec& v, const Vec& x, const Vec& y, const GammaMetric& g);

/// Primal product norm max{|x|, gamma |y|}.
double prod_norm(const Vec& x, const Vec& y, const GammaMetric& g);

/// Dual product norm |x*| + |y*| / gamma.
double dual_norm(const Vec& xs, const Vec& ys, const GammaMetric& g);

/// Axis-aligned box sampled with `resolution` points per dimension.
struct GridSpec {
  Vec lower;
  Vec upper;
  int resolution = 2;

  GridSpec() = default;
  GridSpec(Vec lo, Vec hi, int res);

  int dim() const { return static_cast<int>(lower.size()); }
  std::size_t point_count() const;
  /// Spacing in dimension i.
  double spacing(int i) const;
  double max_spacing() const;
  /// Euclidean diameter of the box.
  double diameter() const;
  void validate() const;
};

/// Global default cap on the number of points a single grid may produce.
inline constexpr std::size_t kDefaultMaxPoints = 5'000'000;

/// All grid points in lexicographic order (last index fastest).
std::vector<Vec> make_grid(const GridSpec& spec, std::size_t max_points = kDefaultMaxPoints);

/// Concatenation (a, b).
Vec concat(const Vec& a, const Vec& b);

}  // namespace regulab
