#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regulab/spaces.hpp"

namespace regulab {

/// {x : A x <= b}.
struct Polyhedron {
  Mat A;
  Vec b;

  Polyhedron() = default;
  Polyhedron(Mat a, Vec rhs);

  int dim() const { return static_cast<int>(A.cols()); }
  int rows() const { return static_cast<int>(A.rows()); }
  /// Row residuals are compared against tol * max(1, |a_i|).
  bool contains(const Vec& x, double tol = 1e-9) const;
  /// Feasibility via the projector; cached by callers if needed.
  bool is_empty() const;

  static Polyhedron box(const Vec& lower, const Vec& upper);
  /// No rows: all of R^dim.
  static Polyhedron whole_space(int dim);
};

/// Finite union of polyhedra sharing one ambient dimension. No pieces = empty set.
struct PolyUnion {
  int dim = 0;
  std::vector<Polyhedron> pieces;
};

/// Finite, duplicate-free set of points.
struct PointCloud {
  int dim = 0;
  std::vector<Vec> points;

  PointCloud() = default;
  /// Removes points closer than `dedup_tol` (max-norm) to an earlier point.
  PointCloud(int dimension, std::vector<Vec> pts, double dedup_tol = 1e-12);
};

/// A closed-form rule evaluated on a grid: each grid point is lifted to zero or
/// more points of the set. The set itself is only available once a grid is
/// attached.
struct Sampler {
  int dim = 0;
  std::string label;
  std::function<std::vector<Vec>(const Vec&)> lift;
  std::optional<GridSpec> grid;

  PointCloud materialize(std::size_t max_points = kDefaultMaxPoints) const;
};

class RegionSpec {
 public:
  using Variant = std::variant<PolyUnion, PointCloud, Sampler>;

  RegionSpec() = default;
  RegionSpec(PolyUnion u) : v_(std::move(u)) {}
  RegionSpec(PointCloud c) : v_(std::move(c)) {}
  RegionSpec(Sampler s) : v_(std::move(s)) {}
  RegionSpec(Polyhedron p);

  static RegionSpec empty(int dim) { return RegionSpec(PolyUnion{dim, {}}); }

  int dim() const;
  const Variant& variant() const { return v_; }
  bool is_poly() const { return std::holds_alternative<PolyUnion>(v_); }
  bool is_cloud() const { return std::holds_alternative<PointCloud>(v_); }
  bool is_sampler() const { return std::holds_alternative<Sampler>(v_); }
  const PolyUnion& poly() const { return std::get<PolyUnion>(v_); }
  const PointCloud& cloud() const { return std::get<PointCloud>(v_); }
  const Sampler& sampler() const { return std::get<Sampler>(v_); }

  /// True for an empty PolyUnion/PointCloud, or a PolyUnion of empty pieces.
  bool known_empty() const;
  /// Single convex polyhedron (the case where exact convex machinery applies).
  bool is_single_polyhedron() const { return is_poly() && poly().pieces.size() == 1; }
  bool contains(const Vec& x, double tol = 1e-9) const;

 private:
  Variant v_ = PolyUnion{};
};

struct Projection {
  double distance = kInf;
  std::optional<Vec> nearest;
};

/// Euclidean projection onto a nonempty polyhedron by a dual active-set
/// method. Throws EmptinessError when a Farkas certificate appears and
/// NumericError (carrying the current iterate) after `max_iter` active-set
/// changes.
Vec project_polyhedron(const Vec& x, const Polyhedron& q, double tol = 1e-10, int max_iter = 10000);

/// Distance and nearest point; +inf and no point for the empty set.
Projection dist_to_region(const Vec& x, const RegionSpec& s);

/// Finitely generated cone {G lambda + L theta : lambda >= 0}.
struct ConeRep {
  int dim = 0;
  std::vector<Vec> generators;
  std::vector<Vec> lineality;
  /// Set when the base point is outside the set: the normal cone is empty by convention.
  bool empty = false;
  /// Built from samples (point clouds); never an exact object.
  bool sampled = false;

  static ConeRep empty_cone(int dim) { ConeRep c; c.dim = dim; c.empty = true; return c; }
  static ConeRep zero(int dim) { ConeRep c; c.dim = dim; return c; }

  bool is_trivial() const { return !empty && generators.empty() && lineality.empty(); }
  /// Euclidean projection onto the cone (NNLS after removing the lineality part).
  Vec project(const Vec& v) const;
  double distance(const Vec& v) const;
  bool contains(const Vec& v, double tol = 1e-9) const;
};

/// Cone {d : H d <= 0} converted to generators and a lineality basis by
/// enumerating candidate extreme rays. Intended for dimensions <= 8.
ConeRep cone_from_inequalities(const Mat& h, int dim);

struct NormalConeOptions {
  double act_tol = 1e-8;
  /// Neighbourhood used by the sampled limsup test on point clouds.
  double cloud_radius = 0.05;
};

/// Normal cone: convex-analysis cone for a single polyhedron, Frechet cone
/// (intersection of per-piece cones) for unions, sampled cone for clouds.
ConeRep normal_cone_at(const RegionSpec& s, const Vec& x, const NormalConeOptions& opt = {});

/// Tangent cone {d : A_act d <= 0} of a polyhedron at x, as the active rows.
Mat active_rows(const Polyhedron& q, const Vec& x, double act_tol = 1e-8);

/// Subdifferential of v -> |v - base| at y.
struct NormSubdifferential {
  /// y == base: the closed dual unit ball.
  bool unit_ball = false;
  /// Otherwise the singleton (y - base) / |y - base|.
  Vec direction;
};

NormSubdifferential norm_subdifferential(const Vec& y, const Vec& base);

}  // namespace regulab
