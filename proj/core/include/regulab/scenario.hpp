#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regulab/implicit.hpp"

namespace regulab {

/// One requested check with its per-check options.
struct CheckSpec {
  /// oracle | geometric | modulus | P1 | C22 | P5 | T2 | C33 | C34 | recede |
  /// aubin | prop57 | prop58 | evp
  std::string name;
  /// Row label in the report and CSV; defaults to the name plus options.
  std::string label;
  Mode mode = Mode::Sufficient;
  std::optional<double> scan_radius;
  /// T2: convex-normal | frechet-cap
  std::string variant = "convex-normal";
  /// P5, C33, C34: clarke | frechet
  std::string cone = "clarke";
  /// prop58 condition selector.
  std::string condition = "normal-cone-convex";
  /// Coderivative radius for C33 / C34 / prop58.
  std::optional<double> eta;
  std::optional<double> l;
  std::optional<double> l_prime;
  std::optional<double> c7_epsilon;
  /// evp: start point (snapped to the x grid), eps and lambda.
  std::optional<Vec> start;
  std::optional<double> eps;
  std::optional<double> lambda;
  std::optional<Verdict> expect;
};

struct OutputOptions {
  std::string csv = "results.csv";
  std::string report = "report.txt";
};

struct Scenario {
  std::string name;
  std::string description;
  std::optional<SetValuedMap> mapping;
  RegularityQuery query;
  std::optional<double> l;
  std::optional<double> l_prime;
  ScanGrids grids;
  std::vector<CheckSpec> checks;
  bool cross_validate = false;
  OutputOptions output;
  /// Normalized scenario with all defaults filled in, as JSON text.
  std::string echo;
};

/// Parses a scenario document. Errors are InputError with the line and
/// column of a syntax error or the dotted path of the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct CheckOutcome {
  std::string label;
  Certificate cert;
  double seconds = 0.0;
  std::optional<Verdict> expect;
  bool matches = true;
};

struct RunResult {
  std::vector<CheckOutcome> outcomes;
  /// Cross-validation conflicts (a sufficient condition HOLDS while the
  /// oracle is VIOLATED, or the oracle HOLDS while a necessary one fails).
  std::vector<std::string> conflicts;
  bool all_expected = true;
};

/// Runs the checks in dependency order: oracle, geometric and modulus
/// first, the rest in file order. With cross_validate the oracle is added
/// when missing.
RunResult run_scenario(const Scenario& s);

/// The two shipped example scenarios.
std::string example_a_json();
std::string example_b_json();

}  // namespace regulab
