// Scalar companions of the nonlinearity: truncation T_k, the convex
// primitive of phi, the bounded weight psi with its derivative, the
// gradient-compactness transform beta, and the primitives A and Theta_k.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/quadrature.hpp"

namespace stefanlab {

/// T_k(s) = min(k, |s|) sign(s).
inline double truncate(double k, double s) {
  if (!(k > 0.0)) throw ArgumentError("truncate: level k must be positive");
  return std::copysign(std::min(k, std::abs(s)), s);
}

/// Convex primitive of phi with Phi(0) = 0, integrated exactly piece by
/// piece (phi is affine on each piece, so the trapezoid rule is exact).
inline double primitive_Phi(const Nonlinearity& nl, double s) {
  if (s == 0.0) return 0.0;
  const double lo = std::min(0.0, s), hi = std::max(0.0, s);
  double acc = 0.0;
  for (const auto& p : nl.pieces_in(lo, hi)) {
    const double y1 = p.y0 + p.slope * (p.x1 - p.x0);
    acc += 0.5 * (p.x1 - p.x0) * (p.y0 + y1);
  }
  return s > 0.0 ? acc : -acc;
}

/// psi(s) = ln(1+|s|)/(1+ln(1+|s|)) sign(s). Odd, bounded by 1.
inline double psi_eval(double s) {
  const double l = std::log1p(std::abs(s));
  return std::copysign(l / (1.0 + l), s);
}

/// psi'(s) = 1/((1+|s|)(1+ln(1+|s|))^2). Even and positive.
inline double psi_prime(double s) {
  const double a = 1.0 + std::abs(s);
  const double l = 1.0 + std::log1p(std::abs(s));
  return 1.0 / (a * l * l);
}

inline double sqrt_psi_prime(double s) {
  const double l = 1.0 + std::log1p(std::abs(s));
  return 1.0 / (std::sqrt(1.0 + std::abs(s)) * l);
}

/// Level with psi = 1/2, i.e. ln(1+s) = 1.
inline double psi_half_level() { return std::numbers::e - 1.0; }

/// beta(s) = integral_0^s sqrt(psi'). Odd, 1/2-Hoelder by construction.
inline double beta_eval(double s, QuadratureControl ctl = {}) {
  if (s == 0.0) return 0.0;
  const double v = adaptive_simpson([](double t) { return sqrt_psi_prime(t); }, 0.0,
                                    std::abs(s), ctl);
  return std::copysign(v, s);
}

/// A(s) = integral_0^s psi(phi(a)) da, nonnegative and at most |s|.
/// Integrated by adaptive quadrature on each affine piece of phi.
inline double A_eval(const Nonlinearity& nl, double s, QuadratureControl ctl = {}) {
  if (s == 0.0) return 0.0;
  const double lo = std::min(0.0, s), hi = std::max(0.0, s);
  double acc = 0.0;
  for (const auto& p : nl.pieces_in(lo, hi)) {
    if (p.x1 == p.x0) continue;
    acc += adaptive_simpson(
        [&](double a) { return psi_eval(p.y0 + p.slope * (a - p.x0)); }, p.x0, p.x1, ctl);
  }
  return s > 0.0 ? acc : -acc;
}

/// Theta_k(s) = integral_0^s T_k(phi(t)) dt, evaluated exactly. On each
/// affine piece the clipped integrand is piecewise linear with kinks where
/// phi crosses +-k, so splitting there makes the trapezoid rule exact.
inline double Theta_k_eval(const Nonlinearity& nl, double k, double s) {
  if (!(k > 0.0)) throw ArgumentError("Theta_k_eval: level k must be positive");
  if (s == 0.0) return 0.0;
  const double lo = std::min(0.0, s), hi = std::max(0.0, s);
  double acc = 0.0;
  std::vector<double> cuts;
  for (const auto& p : nl.pieces_in(lo, hi)) {
    cuts.clear();
    cuts.push_back(p.x0);
    if (p.slope != 0.0) {
      for (double level : {-k, k}) {
        const double t = p.x0 + (level - p.y0) / p.slope;
        if (t > p.x0 && t < p.x1) cuts.push_back(t);
      }
      if (cuts.size() == 3 && cuts[1] > cuts[2]) std::swap(cuts[1], cuts[2]);
    }
    cuts.push_back(p.x1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      const double fa = truncate(k, p.y0 + p.slope * (a - p.x0));
      const double fb = truncate(k, p.y0 + p.slope * (b - p.x0));
      acc += 0.5 * (b - a) * (fa + fb);
    }
  }
  return s > 0.0 ? acc : -acc;
}

} // namespace stefanlab
