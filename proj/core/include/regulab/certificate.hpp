#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regulab/spaces.hpp"

namespace regulab {

enum class Verdict { Holds, Violated, Inconclusive };

std::string to_string(Verdict v);

struct Witness {
  Vec p;
  Vec x;
  /// Empty when no y-component is involved (e.g. an empty value F(p, x)).
  Vec y;
  double value = 0.0;
};

/// Everything a reader needs to reproduce a scan.
struct ScanMeta {
  double alpha = 0.0;
  double delta = 0.0;
  double mu = 0.0;
  double eta = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  /// Threshold the scanned quantity was compared against.
  double threshold = 0.0;
  /// Radius of the x-region that was scanned.
  double x_radius = 0.0;
  std::string grid_res;
  double strict_tol = 0.0;
  double compare_tol = 0.0;
  std::vector<std::string> clamps;
  bool sampled = false;
  std::size_t scanned = 0;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::string> notes;

  void set(const std::string& key, double v);
  std::optional<double> get(const std::string& key) const;
};

struct Certificate {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  /// Smallest slack (value - threshold) over the scan; negative iff violated.
  double margin = kInf;
  std::optional<Witness> witness;
  /// The inequality that failed at the witness, in words.
  std::string failed;
  /// Named observations (e.g. C7-style flags) that do not change the verdict.
  std::vector<std::string> flags;
  ScanMeta meta;

  bool holds() const { return verdict == Verdict::Holds; }
  bool violated() const { return verdict == Verdict::Violated; }
};

}  // namespace regulab
