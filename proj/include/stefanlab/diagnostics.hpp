// Compactness diagnostics comparing computed trajectories: the monotonicity
// (Minty) gap that turns weak convergence into strong convergence of
// truncated fluxes, the dual-norm equicontinuity modulus in time, and
// trajectory distances in the dual norm.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stefanlab/aux_functions.hpp"
#include "stefanlab/grid.hpp"
#include "stefanlab/linear_solvers.hpp"
#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/norms.hpp"
#include "stefanlab/operators.hpp"

namespace stefanlab {

namespace detail {

inline void require_comparable(const Trajectory& a, const Trajectory& b,
                               const char* context) {
  if (a.grid() != b.grid())
    throw StructuralError(std::string(context) + ": trajectories on different grids");
  if (!(a.partition() == b.partition()))
    throw StructuralError(std::string(context) +
                          ": trajectories on different time partitions");
}

} // namespace detail

/// Space-time monotonicity gap between two trajectories at one truncation
/// level. For every scalar pair the composite inequality
///   (T_k(phi(a)) - T_k(phi(b)))^2 <= L_phi (T_k(phi(a)) - T_k(phi(b))) (a - b)
/// holds with a nonnegative right factor, so gap_sq <= lipschitz * pairing_L1
/// and pairing_L1 shrinking drives the truncated fluxes together in L2.
struct TruncationGapReport {
  double k = 0.0;
  double gap_sq = 0.0;     // int int (T_k phi(a) - T_k phi(b))^2
  double pairing_L1 = 0.0; // int int (T_k phi(a) - T_k phi(b)) (a - b)
  bool sign_ok = true;     // every pointwise pairing term >= 0
};

inline TruncationGapReport truncation_gap(const Trajectory& a, const Trajectory& b,
                                          const Nonlinearity& nl, double k) {
  detail::require_comparable(a, b, "truncation_gap");
  if (!(k > 0.0)) throw ArgumentError("truncation_gap: k must be positive");
  TruncationGapReport rep;
  rep.k = k;
  const double dt = a.partition().dt();
  const double vol = a.grid().cell_volume();
  for (int m = 1; m <= a.steps(); ++m) {
    const GridFunction& ua = a.state(m);
    const GridFunction& ub = b.state(m);
    for (std::size_t i = 0; i < ua.size(); ++i) {
      const double gap = truncate(k, nl(ua[i])) - truncate(k, nl(ub[i]));
      const double pair = gap * (ua[i] - ub[i]);
      if (pair < -1e-15 * (1.0 + gap * gap)) rep.sign_ok = false;
      rep.gap_sq += dt * vol * gap * gap;
      rep.pairing_L1 += dt * vol * pair;
    }
  }
  return rep;
}

/// Largest ratio ||u(t2) - u(t1)||_{H-1} / sqrt(t2 - t1) over all node pairs.
/// The a priori bound makes this no larger than the L2-in-time dual norm of
/// the discrete time derivative, uniformly in the regularization.
struct EquicontinuityReport {
  double modulus = 0.0;
  int arg_m1 = 0;
  int arg_m2 = 0;
};

inline EquicontinuityReport equicontinuity_modulus(const Trajectory& traj) {
  const PoissonSolver poisson(traj.grid());
  const int last = traj.steps();
  // One Dirichlet witness per state; each pair then costs a dot product.
  std::vector<GridFunction> witness;
  witness.reserve(last + 1);
  for (int m = 0; m <= last; ++m) witness.push_back(poisson.solve(traj.state(m)));

  EquicontinuityReport rep;
  const double dt = traj.partition().dt();
  GridFunction diff(traj.grid()), wdiff(traj.grid());
  for (int m1 = 0; m1 < last; ++m1)
    for (int m2 = m1 + 1; m2 <= last; ++m2) {
      for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = traj.state(m2)[i] - traj.state(m1)[i];
        wdiff[i] = witness[m2][i] - witness[m1][i];
      }
      const double sq = std::max(0.0, inner(diff, wdiff));
      const double ratio = std::sqrt(sq / (dt * (m2 - m1)));
      if (ratio > rep.modulus) {
        rep.modulus = ratio;
        rep.arg_m1 = m1;
        rep.arg_m2 = m2;
      }
    }
  return rep;
}

/// sup_m ||a_m - b_m||_{H-1}; the Cauchy gauge of the viscosity sweep.
inline double trajectory_distance_sup_Hm1(const Trajectory& a, const Trajectory& b) {
  detail::require_comparable(a, b, "trajectory_distance_sup_Hm1");
  const PoissonSolver poisson(a.grid());
  double worst = 0.0;
  GridFunction diff(a.grid());
  for (int m = 0; m <= a.steps(); ++m) {
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = a.state(m)[i] - b.state(m)[i];
    worst = std::max(worst, norm_Hminus1(diff, poisson));
  }
  return worst;
}

} // namespace stefanlab
