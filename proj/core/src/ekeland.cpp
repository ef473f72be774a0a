#include "regulab/ekeland.hpp"

#include <algorithm>
#include <cmath>

#include "regulab/errors.hpp"

namespace regulab {

EvpResult evp_search(const std::vector<Vec>& points, const std::vector<double>& f, std::size_t start, double eps,
                     double lambda) {
  if (points.size() != f.size()) throw InputError("evp_search: points and values differ in length");
  if (start >= points.size()) throw InputError("evp_search: start index out of range");
  if (!(eps > 0) || !(lambda > 0) || !std::isfinite(eps) || !std::isfinite(lambda)) {
    throw InputError("evp_search: eps and lambda must be positive and finite");
  }
  double inf_f = kInf;
  for (double v : f) {
    if (std::isnan(v) || v == -kInf) throw InputError("evp_search: f must be lower bounded and not NaN");
    inf_f = std::min(inf_f, v);
  }
  if (!(f[start] < inf_f + eps)) throw InputError("evp_search: requires f(x) < inf f + eps");

  const double k = eps / lambda;
  EvpResult out;
  std::size_t cur = start;
  out.trace.push_back(cur);
  for (;;) {
    std::size_t next = cur;
    double best = f[cur];
    for (std::size_t u = 0; u < points.size(); ++u) {
      if (u == cur || !std::isfinite(f[u])) continue;
      const double v = f[u] + k * (points[u] - points[cur]).norm();
      if (v < best) {
        best = v;
        next = u;
      }
    }
    if (next == cur) break;
    cur = next;
    out.trace.push_back(cur);
  }

  out.xhat_index = cur;
  out.xhat = points[cur];
  out.within_lambda = (out.xhat - points[start]).norm() < lambda;
  out.not_worse = f[cur] <= f[start];
  out.perturbed_minimum = true;
  for (std::size_t u = 0; u < points.size(); ++u) {
    if (f[u] + k * (points[u] - out.xhat).norm() < f[cur] - 1e-12) {
      out.perturbed_minimum = false;
      break;
    }
  }
  return out;
}

}  // namespace regulab
