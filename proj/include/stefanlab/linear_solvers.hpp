// Direct tridiagonal solves, preconditioned conjugate gradients, and a
// reusable solver for the discrete Dirichlet problem.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/operators.hpp"

namespace stefanlab {

/// Thomas algorithm without pivoting. sub/sup have size n-1. Intended for the
/// diagonally dominant M-matrices arising from the implicit time steps; no
/// pivoting is needed for those.
inline std::vector<double> solve_tridiagonal(const std::vector<double>& sub,
                                             const std::vector<double>& diag,
                                             const std::vector<double>& sup,
                                             const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (sub.size() + 1 != n || sup.size() + 1 != n || rhs.size() != n)
    throw StructuralError("solve_tridiagonal: band size mismatch");
  std::vector<double> c(n, 0.0), d(n, 0.0);
  double pivot = diag[0];
  if (pivot == 0.0) throw NumericalError("solve_tridiagonal: zero pivot");
  c[0] = (n > 1) ? sup[0] / pivot : 0.0;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i - 1] * c[i - 1];
    if (pivot == 0.0) throw NumericalError("solve_tridiagonal: zero pivot");
    if (i + 1 < n) c[i] = sup[i] / pivot;
    d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

struct CgOptions {
  double rel_tol = 1e-10;
  int max_iter = 0; // 0 means 10*n + 200
};

/// Preconditioned conjugate gradients for an SPD operator given as a functor
/// apply(x, y) writing y = A x. `jacobi` may be empty (identity
/// preconditioner). Starts from x = 0, returns the iteration count.
template <class Apply>
int conjugate_gradient(const Apply& apply, const std::vector<double>& rhs,
                       std::vector<double>& x, const std::vector<double>& jacobi,
                       const CgOptions& opt = {}) {
  const std::size_t n = rhs.size();
  x.assign(n, 0.0);
  double bnorm = 0.0;
  for (double v : rhs) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return 0;

  const bool precond = !jacobi.empty();
  std::vector<double> r = rhs, z(n), p(n), q(n);
  if (precond)
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / jacobi[i];
  else
    z = r;
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

  const int max_iter = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(10 * n + 200);
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, q);
    double pq = 0.0;
    for (std::size_t i = 0; i < n; ++i) pq += p[i] * q[i];
    if (pq <= 0.0) throw NumericalError("conjugate_gradient: operator not positive definite");
    const double alpha = rz / pq;
    double rnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
      rnorm += r[i] * r[i];
    }
    if (std::sqrt(rnorm) <= opt.rel_tol * bnorm) return it;
    if (precond)
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / jacobi[i];
    else
      z = r;
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw NumericalError("conjugate_gradient: no convergence within " +
                       std::to_string(max_iter) + " iterations");
}

/// Solver for A w = g with A the discrete negative Laplacian of one grid.
/// 1D factorizes the tridiagonal matrix once; 2D runs conjugate gradients
/// with relative residual 1e-10.
class PoissonSolver {
public:
  explicit PoissonSolver(Grid grid) : grid_(std::move(grid)) {
    if (grid_.dim() == 1) {
      const int n = grid_.cells(0);
      const double w = 1.0 / (grid_.spacing(0) * grid_.spacing(0));
      sub_.assign(n - 1, -w);
      diag_.assign(n, 2.0 * w);
      sup_.assign(n - 1, -w);
    }
  }

  const Grid& grid() const { return grid_; }

  std::vector<double> solve(const std::vector<double>& rhs) const {
    if (rhs.size() != grid_.num_nodes())
      throw StructuralError("PoissonSolver: rhs size does not match grid");
    if (grid_.dim() == 1) return solve_tridiagonal(sub_, diag_, sup_, rhs);
    GridFunction tmp(grid_);
    std::vector<double> x;
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
      tmp.values() = in;
      apply_laplacian_into(tmp, out);
    };
    conjugate_gradient(apply, rhs, x, {}, CgOptions{1e-10, 0});
    return x;
  }

  GridFunction solve(const GridFunction& rhs) const {
    if (rhs.grid() != grid_) throw StructuralError("PoissonSolver: rhs grid mismatch");
    GridFunction w(grid_, solve(rhs.values()));
    w.ensure_finite("PoissonSolver::solve");
    return w;
  }

private:
  Grid grid_;
  std::vector<double> sub_, diag_, sup_;
};

} // namespace stefanlab
