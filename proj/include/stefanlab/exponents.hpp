// Interpolation exponent bookkeeping for the compactness argument with
// integrable data: starting from u in L^inf(L^1) and gradient control in
// L^p, the chain Lp -> L^{p*} (Sobolev), interpolation against L^1, and a
// time-space Hoelder step produce an integrability exponent r and an
// exponent beta for the time modulus. The argument closes only when every
// derived exponent lands strictly inside its window; `admissible` records
// that check.
#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "stefanlab/errors.hpp"

namespace stefanlab {

struct ExponentTable {
  int dim = 0;
  double p = 0.0;
  double theta1 = 0.0; // space interpolation exponent
  double theta2 = 0.0; // space-time interpolation exponent
  double theta = 0.0;  // the working exponent, half of 1 + min(theta1, theta2)
  double p_star = 0.0; // Sobolev conjugate d p / (d - p)
  double r = 0.0;      // integrability gained, theta p / (2 - p)
  double zeta = 0.0;   // interpolation weight between L^1 and L^{p*}
  double beta = 0.0;   // time-modulus exponent, must stay below (2 - p)/2
  bool admissible = false;
  std::vector<std::string> notes;
};

/// Derives the full exponent chain for spatial dimension d in {2, 3} and
/// gradient integrability p in ]1, (d+2)/(d+1)[.
inline ExponentTable interpolation_exponents(int dim, double p) {
  if (dim != 2 && dim != 3)
    throw ArgumentError("interpolation_exponents: dim must be 2 or 3");
  const double p_max = (dim + 2.0) / (dim + 1.0);
  if (!(p > 1.0) || !(p < p_max))
    throw ArgumentError("interpolation_exponents: p must lie in ]1, " +
                        std::to_string(p_max) + "[");

  ExponentTable t;
  t.dim = dim;
  t.p = p;
  const double d = dim;
  t.theta1 = d * (2.0 - p) / (d - p);
  t.theta2 = (d + 1.0) * (2.0 - p) / d;
  t.theta = 0.5 * (1.0 + std::min(t.theta1, t.theta2));
  t.p_star = d * p / (d - p);
  t.r = t.theta * p / (2.0 - p);
  t.zeta = (1.0 - 1.0 / t.r) / (1.0 - 1.0 / t.p_star);
  t.beta = (2.0 - p) * t.r * t.zeta / (2.0 * p);

  t.admissible = true;
  auto fail = [&t](const std::string& msg) {
    t.admissible = false;
    t.notes.push_back(msg);
  };
  if (!(t.theta > 1.0)) fail("theta did not exceed 1");
  if (!(t.r > 1.0)) fail("r did not exceed 1");
  if (!(t.r < t.p_star)) fail("r reached the Sobolev conjugate");
  if (!(t.zeta > 0.0 && t.zeta < 1.0)) fail("interpolation weight left ]0,1[");
  if (!(t.zeta * t.r < p)) fail("zeta * r reached p");
  const double beta_cap = 0.5 * (2.0 - p);
  if (!(t.beta < beta_cap)) fail("beta reached (2-p)/2");
  if (t.admissible)
    t.notes.push_back("margin (2-p)/2 - beta = " + std::to_string(beta_cap - t.beta));
  return t;
}

} // namespace stefanlab
