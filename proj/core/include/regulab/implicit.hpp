#pragma once

#include <string>

#include "regulab/dual.hpp"
#include "regulab/slope.hpp"

namespace regulab {

/// Aubin property of G(p) = {x : ybar in F(p, x)} at (pbar, xbar) with rate l.
struct AubinQuery {
  Vec pbar;
  Vec xbar;
  Vec ybar;
  double l = 1.0;
  Extent eta{1.0};
  Extent delta{1.0};
  Extent mu{1.0};

  void validate(const SetValuedMap& f) const;
};

/// d(ybar, F(p, x)) <= l d(p, p') for x in B_delta(xbar), p, p' in
/// B_eta(pbar) with d(p, p') < mu and ybar in F(p', x). Uses q.pbar, eta,
/// delta, mu; the witness value is d(ybar, F(p, x)) / d(p, p').
/// Throws InputError for label parameter sets.
Certificate check_recede(const SetValuedMap& f, const RegularityQuery& q, double l, const ScanGrids& grids);

/// d(x, G(p)) <= l d(p, p') for p, p' in B_eta(pbar) with d(p, p') < mu and
/// x in G(p') and B_delta(xbar). The solution points x are the grid points
/// of G(p') together with the projections of the grid and of xbar onto
/// G(p'). The witness value is d(x, G(p)) / d(p, p').
Certificate check_aubin(const SetValuedMap& f, const AubinQuery& aq, const ScanGrids& grids);

struct ComposedAubin {
  AubinQuery claim;
  Certificate validation;
};

/// Aubin claim at rate l / alpha with (eta, delta, mu' = alpha mu / l) from
/// a HOLDS subregularity certificate (alpha, eta, delta, mu) and a HOLDS
/// recede certificate (rate l, eta, delta, mu'), validated by check_aubin.
/// The recede certificate must carry its rate under the meta key "l".
ComposedAubin compose_rate(const SetValuedMap& f, const Certificate& subreg, const Certificate& recede,
                           const Vec& pbar, const Vec& xbar, const Vec& ybar, const ScanGrids& grids);

enum class Prop58Condition { Slope, NormalConeConvex, NormalConeFrechet, CoderivClarke, CoderivFrechet };

/// Accepts slope | normal-cone-convex | normal-cone-frechet | coderiv-clarke |
/// coderiv-frechet; InputError otherwise.
Prop58Condition parse_prop58_condition(const std::string& name);
std::string to_string(Prop58Condition c);

struct Prop58Result {
  Certificate recede;
  Certificate condition;
  /// Present when both premises hold: the Aubin check at rate l with
  /// (eta, delta, mu).
  std::optional<Certificate> aubin;
  /// mu' = alpha' mu_sub / l' with alpha' = l' / l and mu_sub = l mu; equals mu.
  double mu_prime = 0.0;
  Certificate summary;
};

/// Runs recede at rate l', then the selected sufficient condition at
/// threshold l' / l over p in B_eta(pbar), x in B_{delta+mu}(xbar),
/// y in F(p, x) within l' mu of ybar, then the Aubin check at rate l.
/// The coderivative radius defaults to the query's eta.
Prop58Result run_prop58_pipeline(const SetValuedMap& f, const RegularityQuery& q, double l, double l_prime,
                                 Prop58Condition condition, const ScanGrids& grids,
                                 std::optional<double> coderivative_eta = std::nullopt);

}  // namespace regulab
