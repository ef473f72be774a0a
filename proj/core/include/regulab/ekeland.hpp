#pragma once

#include <cstddef>
#include <vector>

#include "regulab/spaces.hpp"

namespace regulab {

struct EvpResult {
  std::size_t xhat_index = 0;
  Vec xhat;
  /// d(xhat, x) < lambda
  bool within_lambda = false;
  /// f(xhat) <= f(x)
  bool not_worse = false;
  /// f(u) + (eps / lambda) d(u, xhat) >= f(xhat) - 1e-12 for every u.
  bool perturbed_minimum = false;
  /// Indices visited, starting with x; f strictly decreases along it.
  std::vector<std::size_t> trace;

  bool ok() const { return within_lambda && not_worse && perturbed_minimum; }
};

/// Ekeland search on the finite set `points` (Euclidean metric) with values
/// `f` (entries may be +inf). Starting from points[start], repeatedly moves
/// to the minimizer of f(u) + (eps / lambda) d(u, current) among points that
/// strictly improve on f(current); ties go to the lowest index. The three
/// conclusions are then verified exhaustively.
/// Throws InputError unless f(start) < min f + eps, eps > 0 and lambda > 0.
EvpResult evp_search(const std::vector<Vec>& points, const std::vector<double>& f, std::size_t start, double eps,
                     double lambda);

}  // namespace regulab
