#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regulab/sets.hpp"

namespace regulab {

/// Parameter set P: a normed coordinate space (dimension 0 is the singleton
/// {0}) or a finite set of labels, where a parameter value is the
/// one-element vector holding the label index.
struct ParameterCarrier {
  enum class Kind { Normed, Labels };
  Kind kind = Kind::Normed;
  int dim = 0;
  int labels = 1;

  static ParameterCarrier normed(int dimension);
  static ParameterCarrier finite(int count);
  static ParameterCarrier singleton() { return normed(0); }

  bool has_metric() const { return kind == Kind::Normed; }
  /// Length of the vector that encodes one parameter value.
  int value_size() const { return kind == Kind::Normed ? dim : 1; }
  void check(const Vec& p) const;
};

/// One convex piece {(x, y) : A (x, y) <= b + B p} of a polyhedral graph.
/// For label carriers B has no columns.
struct GraphPiece {
  Mat A;
  Vec b;
  Mat B;
};

/// Single-valued smooth rule y = f(p, x) with Jacobian in x and, when
/// available, an exact solver for {x : f(p, x) = y}.
struct ClosedFormRule {
  std::string name;
  std::vector<double> coefficients;
  std::function<Vec(const Vec& p, const Vec& x)> value;
  std::function<Mat(const Vec& p, const Vec& x)> jacobian;
  std::function<std::vector<Vec>(const Vec& p, const Vec& y)> solve;
};

class SetValuedMap {
 public:
  /// `pieces[l]` is the graph of F(l, .) for label carriers; normed carriers
  /// take a single entry whose pieces depend affinely on p.
  static SetValuedMap polyhedral(ParameterCarrier carrier, int xdim, int ydim,
                                 std::vector<std::vector<GraphPiece>> pieces);
  static SetValuedMap closed_form(ParameterCarrier carrier, int xdim, int ydim, ClosedFormRule rule);

  /// F(p, x) = {M x + N p + c}; exact polyhedral graph.
  static SetValuedMap affine(const Mat& m, const Mat& n, const Vec& c);
  /// F(p, x) = {p - x} on R^dim.
  static SetValuedMap linear_diff(int dim);
  /// F(x) = {x} with a singleton parameter set.
  static SetValuedMap identity(int dim);
  /// F(x) = {c x} with a singleton parameter set.
  static SetValuedMap scaled(int dim, double c);
  /// Scalar F(p, x) = {a (p - x)^2}.
  static SetValuedMap square_diff(double a = 1.0);

  const ParameterCarrier& carrier() const { return carrier_; }
  int xdim() const { return xdim_; }
  int ydim() const { return ydim_; }
  bool is_polyhedral() const { return !rule_.has_value(); }
  bool is_closed_form() const { return rule_.has_value(); }
  const ClosedFormRule& rule() const { return *rule_; }
  const std::vector<std::vector<GraphPiece>>& pieces() const { return pieces_; }
  std::string describe() const;

  /// Every gph F_p is a single convex polyhedron.
  bool graph_convex() const;
  /// Exact solution sets and normal cones are available (polyhedral graphs,
  /// or closed-form rules with a solver).
  bool exact() const;

  RegionSpec graph(const Vec& p) const;
  bool in_graph(const Vec& p, const Vec& x, const Vec& y, double tol = 1e-9) const;
  RegionSpec eval(const Vec& p, const Vec& x) const;
  /// dist(ybar, F(p, x)) with its nearest point.
  Projection nearest_value(const Vec& p, const Vec& x, const Vec& ybar) const;
  double residual(const Vec& p, const Vec& x, const Vec& ybar) const;

  /// G(p) = {x : ybar in F(p, x)}. Closed-form rules without a solver are
  /// filtered on `search_grid` with residual <= slice_tol (default: half the
  /// grid spacing); `exact_out` reports which path was used.
  RegionSpec solution_set(const Vec& p, const Vec& ybar, const std::optional<GridSpec>& search_grid = std::nullopt,
                          std::optional<double> slice_tol = std::nullopt, bool* exact_out = nullptr) const;
  Projection dist_to_solutions(const Vec& p, const Vec& x, const Vec& ybar,
                               const std::optional<GridSpec>& search_grid = std::nullopt) const;

  /// Normal cone to gph F_p at (x, y): convex/Frechet cone for polyhedral
  /// graphs, the normal space {(J^T w, -w)} for closed-form rules.
  ConeRep graph_normal_cone(const Vec& p, const Vec& x, const Vec& y, const NormalConeOptions& opt = {}) const;
  /// Tangent cones of the graph pieces that contain (x, y); the tangent cone
  /// of the graph is their union.
  std::vector<ConeRep> graph_tangent_cones(const Vec& p, const Vec& x, const Vec& y, double act_tol = 1e-8) const;

  /// ((p, w), x) -> F(p, x) - w over the parameter space P x Y.
  SetValuedMap hat_reduction() const;

 private:
  SetValuedMap() = default;
  std::vector<Polyhedron> pieces_at(const Vec& p) const;

  ParameterCarrier carrier_;
  int xdim_ = 1;
  int ydim_ = 1;
  std::vector<std::vector<GraphPiece>> pieces_;
  std::optional<ClosedFormRule> rule_;
};

/// Parameters (xbar, ybar, pbar, alpha, delta, mu, eta, gamma, tau) shared by
/// every check.
struct RegularityQuery {
  Vec xbar;
  Vec ybar;
  std::optional<Vec> pbar;
  double alpha = 1.0;
  Extent delta{1.0};
  Extent mu{1.0};
  Extent eta = Extent::unbounded();
  double gamma = 1.0;
  double tau = 0.99;

  /// Throws InputError on dimension mismatches or out-of-range parameters.
  void validate(const SetValuedMap& f) const;
};

}  // namespace regulab
