#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regulab/certificate.hpp"
#include "regulab/mappings.hpp"

namespace regulab {

/// Grids over which every check scans. `p` is used for normed parameter
/// spaces (absent: only pbar); `y` adds extra value samples for set-valued
/// mappings.
struct ScanGrids {
  GridSpec x;
  std::optional<GridSpec> p;
  std::optional<GridSpec> y;
  std::size_t max_points = kDefaultMaxPoints;

  std::string resolution_label() const;
};

/// Relative slack used to scan strict inequalities: a < b becomes
/// a <= b - kStrictRel * b.
inline constexpr double kStrictRel = 1e-12;
/// Residuals at or below this value count as "x is a solution".
inline constexpr double kResidualZero = 1e-12;

/// Scanned version of dist < radius (always true for an infinite radius).
bool strictly_below(double value, double bound);

/// Resolved, finite scan parameters plus the enumerated parameter values.
struct ScanSetup {
  double alpha = 1.0;
  double delta = 1.0;
  double mu = 1.0;
  double eta = kInf;
  double gamma = 1.0;
  double tau = 0.99;
  Vec xbar;
  Vec ybar;
  std::vector<Vec> params;
  std::vector<Vec> xs;
  std::vector<Vec> ys;
  ScanMeta meta;
};

/// Validates the query, clamps unbounded extents to the grid boxes (recorded
/// in meta.clamps) and enumerates parameter values: all labels for a label
/// set, grid points of B_eta(pbar) for a normed P with a grid, else {pbar}.
ScanSetup prepare_scan(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids);

/// One sampled graph point (x, y) of gph F_p.
struct GraphPoint {
  Vec x;
  Vec y;
  /// |y - ybar|
  double ynorm = 0.0;
  /// d(ybar, F(p, x))
  double residual = 0.0;
  /// |x - xbar|
  double xdist = 0.0;
  std::size_t x_index = 0;
};

/// All sampled graph points for one parameter value: grid x with
/// |x - xbar| < x_radius, and y in F(p, x) with |y - ybar| < y_radius taken
/// from the value nearest to ybar and from the y-grid.
struct ParamSample {
  Vec p;
  std::vector<GraphPoint> points;
};

ParamSample sample_graph(const SetValuedMap& f, const ScanSetup& s, const Vec& p, double x_radius, double y_radius);

/// Graph points of a sample satisfying the outer-point constraint:
/// x not a solution, |x - xbar| < scan_radius, |y - ybar| < alpha mu.
std::vector<std::size_t> outer_points(const ParamSample& sample, double scan_radius, double y_radius);

enum class Mode { Sufficient, Necessary };
std::string to_string(Mode m);

/// Value of a condition at one outer point, compared against a threshold.
struct PointValue {
  double value = kInf;
  /// Optional annotation that becomes a certificate flag (first one kept).
  std::string flag;
};

/// Shared driver for every pointwise condition: scans outer points over all
/// parameters, takes the minimum of (value - threshold) and records the
/// first minimizer in scan order as the witness when the condition fails.
struct ConditionSpec {
  std::string check;
  std::string inequality;
  double threshold = 0.0;
  double compare_tol = 1e-7;
  double x_radius = 0.0;
  /// Radii of the sampled graph region (nonlocal candidates live here).
  double graph_x_radius = 0.0;
  double graph_y_radius = 0.0;
};

using PointEvaluator = std::function<PointValue(const ParamSample&, std::size_t point)>;

Certificate run_condition(const SetValuedMap& f, const ScanSetup& s, const ConditionSpec& spec,
                          const PointEvaluator& eval);

}  // namespace regulab

namespace regulab {

/// Mode plus an optional override of the radius of the outer-point scan
/// (otherwise delta + mu in sufficiency mode and delta in necessity mode).
struct CheckOptions {
  Mode mode = Mode::Sufficient;
  std::optional<double> scan_radius;
};

/// Scan radius implied by the options.
double scan_radius_for(const ScanSetup& s, const CheckOptions& opt);

/// gamma used by a check: alpha^-1 in necessity mode, else the query's.
double gamma_for(const ScanSetup& s, const CheckOptions& opt);

/// Comparison tolerance (relative to max(1, threshold)) used by the
/// pointwise condition checks.
double compare_tol_for(const CheckOptions& opt);

}  // namespace regulab
