// Discrete spatial norms and Bochner-type space-time composites.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/linear_solvers.hpp"
#include "stefanlab/operators.hpp"

namespace stefanlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Volume-weighted L^p norm, (h^d sum |g_i|^p)^(1/p); p = kInf gives max |g_i|.
inline double norm_Lp(const GridFunction& g, double p) {
  if (!(p >= 1.0)) throw ArgumentError("norm_Lp: p must be >= 1");
  if (p == kInf) {
    double m = 0.0;
    for (double v : g.values()) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (double v : g.values()) s += v * v;
  } else if (p == 1.0) {
    for (double v : g.values()) s += std::abs(v);
  } else {
    for (double v : g.values()) s += std::pow(std::abs(v), p);
  }
  return std::pow(s * g.grid().cell_volume(), 1.0 / p);
}

/// Discrete H^1_0 seminorm: forward differences over all edges, including the
/// edges reaching the zero boundary. Each edge along axis a carries the
/// weight vol/h_a^2, which reduces to h^(d-2) on isotropic grids and keeps
/// the summation-by-parts identity with the discrete Laplacian exact.
inline double seminorm_H10(const GridFunction& g) {
  const Grid& grid = g.grid();
  const std::vector<double>& v = g.values();
  const double vol = grid.cell_volume();
  double s = 0.0;
  if (grid.dim() == 1) {
    const int n = grid.cells(0);
    const double w = vol / (grid.spacing(0) * grid.spacing(0));
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = v[i] - prev;
      s += w * d * d;
      prev = v[i];
    }
    s += w * prev * prev;
  } else {
    const int nx = grid.cells(0), ny = grid.cells(1);
    const double wx = vol / (grid.spacing(0) * grid.spacing(0));
    const double wy = vol / (grid.spacing(1) * grid.spacing(1));
    for (int j = 0; j < ny; ++j) {
      double prev = 0.0;
      for (int i = 0; i < nx; ++i) {
        const double d = v[grid.index(i, j)] - prev;
        s += wx * d * d;
        prev = v[grid.index(i, j)];
      }
      s += wx * prev * prev;
    }
    for (int i = 0; i < nx; ++i) {
      double prev = 0.0;
      for (int j = 0; j < ny; ++j) {
        const double d = v[grid.index(i, j)] - prev;
        s += wy * d * d;
        prev = v[grid.index(i, j)];
      }
      s += wy * prev * prev;
    }
  }
  return std::sqrt(s);
}

/// Negative-norm value together with its Dirichlet witness w solving A w = g.
struct Hminus1Result {
  double value;
  GridFunction witness;
};

inline Hminus1Result norm_Hminus1_with_witness(const GridFunction& g,
                                               const PoissonSolver& solver) {
  GridFunction w = solver.solve(g);
  double s = inner(g, w);
  // The pairing is a squared seminorm of the witness; clamp tiny negative
  // rounding away before the square root.
  if (s < 0.0) s = 0.0;
  return {std::sqrt(s), std::move(w)};
}

/// Discrete H^-1 norm via one Dirichlet solve.
inline double norm_Hminus1(const GridFunction& g) {
  PoissonSolver solver(g.grid());
  return norm_Hminus1_with_witness(g, solver).value;
}

inline double norm_Hminus1(const GridFunction& g, const PoissonSolver& solver) {
  return norm_Hminus1_with_witness(g, solver).value;
}

/// Which spatial norm a Bochner composite applies to each state.
struct NormSelector {
  enum class Kind { Lp, H10, Hm1 } kind;
  double p; // only for Kind::Lp; kInf gives the max norm

  static NormSelector L1() { return {Kind::Lp, 1.0}; }
  static NormSelector L2() { return {Kind::Lp, 2.0}; }
  static NormSelector Lp(double p) { return {Kind::Lp, p}; }
  static NormSelector Linf() { return {Kind::Lp, kInf}; }
  static NormSelector H10() { return {Kind::H10, 0.0}; }
  static NormSelector Hm1() { return {Kind::Hm1, 0.0}; }
};

inline double spatial_norm(const GridFunction& g, const NormSelector& sel,
                           const PoissonSolver* poisson = nullptr) {
  switch (sel.kind) {
    case NormSelector::Kind::Lp:
      return norm_Lp(g, sel.p);
    case NormSelector::Kind::H10:
      return seminorm_H10(g);
    case NormSelector::Kind::Hm1:
    default:
      return poisson ? norm_Hminus1(g, *poisson) : norm_Hminus1(g);
  }
}

/// Composite (sum_m dt * ||field_m||^q)^(1/q) over a step-indexed family of
/// fields, each weighted by the uniform dt; q = kInf takes the max.
inline double bochner_norm_steps(const std::vector<GridFunction>& fields, double dt,
                                 const NormSelector& sel, double q) {
  if (!(q >= 1.0)) throw ArgumentError("bochner_norm: q must be >= 1");
  if (fields.empty()) return 0.0;
  const PoissonSolver* poisson = nullptr;
  PoissonSolver local(fields.front().grid());
  if (sel.kind == NormSelector::Kind::Hm1) poisson = &local;
  if (q == kInf) {
    double m = 0.0;
    for (const auto& f : fields) m = std::max(m, spatial_norm(f, sel, poisson));
    return m;
  }
  double s = 0.0;
  for (const auto& f : fields) s += dt * std::pow(spatial_norm(f, sel, poisson), q);
  return std::pow(s, 1.0 / q);
}

/// Bochner norm of a trajectory with the left-endpoint rule in time: states
/// u_0, ..., u_{M-1} represent the M intervals. q = kInf is the sup over all
/// M+1 states.
inline double bochner_norm(const Trajectory& traj, const NormSelector& sel, double q) {
  if (!(q >= 1.0)) throw ArgumentError("bochner_norm: q must be >= 1");
  const double dt = traj.partition().dt();
  const PoissonSolver* poisson = nullptr;
  PoissonSolver local(traj.grid());
  if (sel.kind == NormSelector::Kind::Hm1) poisson = &local;
  if (q == kInf) {
    double m = 0.0;
    for (const auto& s : traj.states()) m = std::max(m, spatial_norm(s, sel, poisson));
    return m;
  }
  double s = 0.0;
  for (int m = 0; m < traj.steps(); ++m)
    s += dt * std::pow(spatial_norm(traj.state(m), sel, poisson), q);
  return std::pow(s, 1.0 / q);
}

} // namespace stefanlab
