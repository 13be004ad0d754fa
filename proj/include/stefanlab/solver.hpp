// Backward Euler discretization of  dt u - lap(phi(u) + u/n) = f  with zero
// Dirichlet data, one damped Newton solve per step.
//
// Each step solves F(u) = u + dt A(phi(u) + u/n) - (u_prev + dt f_m) = 0,
// A the discrete negative Laplacian. The scalar map s -> s + dt lam (phi(s)
// + s/n) is strictly increasing for every eigenvalue lam > 0, so the step
// has exactly one solution. Newton directions come from the tridiagonal
// factorization in 1D and from conjugate gradients on the symmetrized
// system D^(1/2) (I + dt A D) D^(-1/2) in 2D, D the slope diagonal. A
// backtracking line search accepts only residual decrease; if 30 halvings
// fail, a handful of constant-slope (L-scheme) sweeps pull the iterate into
// the Newton basin and Newton resumes.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/linear_solvers.hpp"
#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/operators.hpp"
#include "stefanlab/sources.hpp"

namespace stefanlab {

/// Viscosity strength 1/n; the sentinel n = infinity switches the extra
/// dissipation off entirely.
class ViscosityParam {
public:
  static ViscosityParam finite(double n) {
    if (!(n > 0.0)) throw ArgumentError("ViscosityParam: n must be positive");
    return ViscosityParam(n);
  }
  static ViscosityParam infinite() {
    return ViscosityParam(std::numeric_limits<double>::infinity());
  }

  bool is_infinite() const { return std::isinf(n_); }
  double n() const { return n_; }
  double inv() const { return is_infinite() ? 0.0 : 1.0 / n_; }
  std::string label() const {
    if (is_infinite()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", n_);
    return buf;
  }

private:
  explicit ViscosityParam(double n) : n_(n) {}
  double n_;
};

struct NewtonConfig {
  double tol = 1e-10;      // absolute residual bound in the volume-weighted L2 norm
  int max_iter = 50;       // Newton iterations per step
  double damping = 0.5;    // backtracking shrink factor
  int max_backtracks = 30; // line-search halvings before the Picard fallback
  int picard_sweeps = 5;   // constant-slope sweeps per fallback round
  double linear_rel_tol = 1e-12; // inner conjugate-gradient tolerance (2D)
};

/// Everything a run needs besides the viscosity strength.
struct ProblemSpec {
  Grid grid;
  TimePartition partition;
  Nonlinearity nl;
  GridFunction initial;
  SourcePtr source;

  ProblemSpec(Grid g, TimePartition p, Nonlinearity n, GridFunction u0, SourcePtr src)
      : grid(std::move(g)), partition(p), nl(std::move(n)), initial(std::move(u0)),
        source(std::move(src)) {
    if (initial.grid() != grid)
      throw StructuralError("ProblemSpec: initial state lives on a different grid");
    if (!source) throw ArgumentError("ProblemSpec: missing source provider");
    initial.ensure_finite("ProblemSpec initial");
  }
};

struct StepReport {
  int newton_iters = 0;
  int picard_rounds = 0;
  double residual = 0.0;
};

struct SolveReport {
  long total_newton_iters = 0;
  long total_picard_rounds = 0;
  int max_iters_one_step = 0;
  double max_residual = 0.0;
};

/// One-step solver with reusable workspace. Holds its own copy of the
/// problem data; distinct instances never share mutable state.
class ImplicitStepper {
public:
  ImplicitStepper(ProblemSpec spec, ViscosityParam visc, NewtonConfig cfg = {})
      : spec_(std::move(spec)), visc_(visc), cfg_(cfg), n_(spec_.grid.num_nodes()) {}

  /// Solves the implicit equation for one step of width dt; f_m is the
  /// source field of this step. The iteration starts from `guess` when
  /// given, from u_prev otherwise.
  GridFunction step(const GridFunction& u_prev, const GridFunction& f_m, int m,
                    StepReport* report = nullptr,
                    const GridFunction* guess = nullptr) const {
    const Grid& grid = spec_.grid;
    if (u_prev.grid() != grid || f_m.grid() != grid)
      throw StructuralError("ImplicitStepper: field grid mismatch at step " +
                            std::to_string(m));
    const double dt = spec_.partition.dt();
    const double inv_n = visc_.inv();

    std::vector<double> b(n_);
    for (std::size_t i = 0; i < n_; ++i) b[i] = u_prev[i] + dt * f_m[i];

    GridFunction u = guess ? *guess : u_prev;
    std::vector<double> resid(n_), trial_resid(n_);
    double rnorm = residual(u.values(), b, dt, inv_n, resid);

    StepReport rep;
    std::vector<double> delta(n_), trial(n_), slope(n_);
    while (rnorm > cfg_.tol) {
      if (rep.newton_iters >= cfg_.max_iter)
        throw ConvergenceError("Newton stalled at step " + std::to_string(m) +
                                   " with residual " + std::to_string(rnorm),
                               m, rnorm);
      ++rep.newton_iters;
      // Slope diagonal of the Jacobian; floored when no viscosity keeps it
      // positive on plateau nodes.
      for (std::size_t i = 0; i < n_; ++i) {
        slope[i] = spec_.nl.slope(u[i]) + inv_n;
        if (inv_n == 0.0) slope[i] = std::max(slope[i], 1e-12);
      }
      newton_direction(resid, slope, dt, delta);

      double alpha = 1.0;
      bool accepted = false;
      for (int bt = 0; bt <= cfg_.max_backtracks; ++bt) {
        for (std::size_t i = 0; i < n_; ++i) trial[i] = u[i] + alpha * delta[i];
        const double tn = residual(trial, b, dt, inv_n, trial_resid);
        if (tn < rnorm * (1.0 - 1e-4 * alpha)) {
          u.values() = trial;
          resid.swap(trial_resid);
          rnorm = tn;
          accepted = true;
          break;
        }
        alpha *= cfg_.damping;
      }
      if (!accepted) {
        // Constant-slope fallback: contraction for c >= max slope.
        ++rep.picard_rounds;
        picard_sweeps(u.values(), b, dt, inv_n);
        rnorm = residual(u.values(), b, dt, inv_n, resid);
      }
    }
    rep.residual = rnorm;
    if (report) *report = rep;
    u.ensure_finite("ImplicitStepper::step");
    return u;
  }

private:
  // resid = u + dt A(phi(u) + inv_n u) - b; returns the L2,h norm.
  double residual(const std::vector<double>& u, const std::vector<double>& b, double dt,
                  double inv_n, std::vector<double>& resid) const {
    GridFunction g(spec_.grid);
    for (std::size_t i = 0; i < n_; ++i) g[i] = spec_.nl(u[i]) + inv_n * u[i];
    apply_laplacian_into(g, resid);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      resid[i] = u[i] + dt * resid[i] - b[i];
      s += resid[i] * resid[i];
    }
    return std::sqrt(s * spec_.grid.cell_volume());
  }

  // Solves (I + dt A diag(slope)) delta = -resid.
  void newton_direction(const std::vector<double>& resid, const std::vector<double>& slope,
                        double dt, std::vector<double>& delta) const {
    const Grid& grid = spec_.grid;
    if (grid.dim() == 1) {
      const double w = dt / (grid.spacing(0) * grid.spacing(0));
      std::vector<double> sub(n_ - 1), diag(n_), sup(n_ - 1), rhs(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        diag[i] = 1.0 + 2.0 * w * slope[i];
        rhs[i] = -resid[i];
      }
      for (std::size_t i = 0; i + 1 < n_; ++i) {
        sub[i] = -w * slope[i];     // row i+1, column i
        sup[i] = -w * slope[i + 1]; // row i, column i+1
      }
      delta = solve_tridiagonal(sub, diag, sup, rhs);
      return;
    }
    // 2D: e = D^(1/2) delta turns the system into I + dt D^(1/2) A D^(1/2),
    // symmetric positive definite, solved by preconditioned CG.
    std::vector<double> sqrt_slope(n_), rhs(n_), jacobi(n_), e;
    for (std::size_t i = 0; i < n_; ++i) {
      sqrt_slope[i] = std::sqrt(slope[i]);
      rhs[i] = -sqrt_slope[i] * resid[i];
    }
    const double wx = 1.0 / (grid.spacing(0) * grid.spacing(0));
    const double wy = 1.0 / (grid.spacing(1) * grid.spacing(1));
    for (std::size_t i = 0; i < n_; ++i)
      jacobi[i] = 1.0 + dt * slope[i] * 2.0 * (wx + wy);
    GridFunction scaled(grid);
    std::vector<double> lap;
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
      for (std::size_t i = 0; i < n_; ++i) scaled[i] = sqrt_slope[i] * in[i];
      apply_laplacian_into(scaled, lap);
      out.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) out[i] = in[i] + dt * sqrt_slope[i] * lap[i];
    };
    conjugate_gradient(apply, rhs, e, jacobi, CgOptions{cfg_.linear_rel_tol, 0});
    delta.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) delta[i] = e[i] / sqrt_slope[i];
  }

  // L-scheme sweeps: (I + dt (c + inv_n) A) u_next = b - dt A (phi(u) - c u)
  // with c the Lipschitz constant of phi.
  void picard_sweeps(std::vector<double>& u, const std::vector<double>& b, double dt,
                     double inv_n) const {
    const Grid& grid = spec_.grid;
    const double c = spec_.nl.lipschitz();
    GridFunction g(grid);
    std::vector<double> rhs(n_), lap;
    for (int sweep = 0; sweep < cfg_.picard_sweeps; ++sweep) {
      for (std::size_t i = 0; i < n_; ++i) g[i] = spec_.nl(u[i]) - c * u[i];
      apply_laplacian_into(g, lap);
      for (std::size_t i = 0; i < n_; ++i) rhs[i] = b[i] - dt * lap[i];
      const double coeff = dt * (c + inv_n);
      if (grid.dim() == 1) {
        const double w = coeff / (grid.spacing(0) * grid.spacing(0));
        std::vector<double> sub(n_ - 1, -w), diag(n_, 1.0 + 2.0 * w), sup(n_ - 1, -w);
        u = solve_tridiagonal(sub, diag, sup, rhs);
      } else {
        GridFunction tmp(grid);
        std::vector<double> lap2;
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
          tmp.values() = in;
          apply_laplacian_into(tmp, lap2);
          out.resize(n_);
          for (std::size_t i = 0; i < n_; ++i) out[i] = in[i] + coeff * lap2[i];
        };
        conjugate_gradient(apply, rhs, u, {}, CgOptions{cfg_.linear_rel_tol, 0});
      }
    }
  }

  ProblemSpec spec_;
  ViscosityParam visc_;
  NewtonConfig cfg_;
  std::size_t n_;
};

/// Full trajectory u_0, ..., u_M.
inline Trajectory solve(const ProblemSpec& spec, ViscosityParam visc, NewtonConfig cfg = {},
                        SolveReport* report = nullptr) {
  std::vector<GridFunction> states;
  states.reserve(spec.partition.steps() + 1);
  states.push_back(spec.initial);
  ImplicitStepper stepper(spec, visc, cfg);
  SolveReport rep;
  for (int m = 1; m <= spec.partition.steps(); ++m) {
    const GridFunction f_m = spec.source->field(m);
    StepReport sr;
    states.push_back(stepper.step(states.back(), f_m, m, &sr));
    rep.total_newton_iters += sr.newton_iters;
    rep.total_picard_rounds += sr.picard_rounds;
    rep.max_iters_one_step = std::max(rep.max_iters_one_step, sr.newton_iters);
    rep.max_residual = std::max(rep.max_residual, sr.residual);
  }
  if (report) *report = rep;
  return Trajectory(spec.partition, std::move(states));
}

} // namespace stefanlab
