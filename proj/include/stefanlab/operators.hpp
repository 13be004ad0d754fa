// Second-difference operator with zero Dirichlet extension, its eigenpairs,
// and discrete time differences.
#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "stefanlab/grid.hpp"

namespace stefanlab {

/// y = A g where A is the 3-point (1D) or 5-point (2D) approximation of the
/// NEGATIVE Laplacian. Off-grid neighbours contribute 0. `out` is resized.
inline void apply_laplacian_into(const GridFunction& g, std::vector<double>& out) {
  const Grid& grid = g.grid();
  const std::vector<double>& v = g.values();
  out.assign(v.size(), 0.0);
  if (grid.dim() == 1) {
    const int n = grid.cells(0);
    const double w = 1.0 / (grid.spacing(0) * grid.spacing(0));
    for (int i = 0; i < n; ++i) {
      const double left = (i > 0) ? v[i - 1] : 0.0;
      const double right = (i + 1 < n) ? v[i + 1] : 0.0;
      out[i] = w * (2.0 * v[i] - left - right);
    }
  } else {
    const int nx = grid.cells(0), ny = grid.cells(1);
    const double wx = 1.0 / (grid.spacing(0) * grid.spacing(0));
    const double wy = 1.0 / (grid.spacing(1) * grid.spacing(1));
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = grid.index(0, j);
      for (int i = 0; i < nx; ++i) {
        const std::size_t p = row + i;
        const double left = (i > 0) ? v[p - 1] : 0.0;
        const double right = (i + 1 < nx) ? v[p + 1] : 0.0;
        const double down = (j > 0) ? v[p - nx] : 0.0;
        const double up = (j + 1 < ny) ? v[p + nx] : 0.0;
        out[p] = wx * (2.0 * v[p] - left - right) + wy * (2.0 * v[p] - down - up);
      }
    }
  }
}

/// Negative-Laplacian image as a new field.
inline GridFunction apply_laplacian(const GridFunction& g) {
  std::vector<double> out;
  apply_laplacian_into(g, out);
  GridFunction r(g.grid(), std::move(out));
  r.ensure_finite("apply_laplacian");
  return r;
}

/// Discrete volume-weighted inner product, h^d sum a_i b_i.
inline double inner(const GridFunction& a, const GridFunction& b) {
  if (a.grid() != b.grid()) throw StructuralError("inner: fields live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

/// Discrete version of the Dirichlet pairing of gradients, h^d sum (A a)_i b_i.
/// Symmetric in (a, b) by summation by parts.
inline double stiffness_pairing(const GridFunction& a, const GridFunction& b) {
  if (a.grid() != b.grid())
    throw StructuralError("stiffness_pairing: fields live on different grids");
  std::vector<double> la;
  apply_laplacian_into(a, la);
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += la[i] * b[i];
  return s * a.grid().cell_volume();
}

/// Eigenvalue of the discrete negative Laplacian for the sampled mode
/// prod_a sin(k_a pi x_a / L_a): sum over axes of (2/h_a^2)(1 - cos(k_a pi h_a / L_a)).
/// k_y is ignored in 1D.
inline double laplacian_eigenvalue(const Grid& grid, int kx, int ky = 1) {
  double lam = 0.0;
  const int k[2] = {kx, ky};
  for (int a = 0; a < grid.dim(); ++a) {
    const double h = grid.spacing(a);
    lam += (2.0 / (h * h)) * (1.0 - std::cos(k[a] * std::numbers::pi * h / grid.length(a)));
  }
  return lam;
}

/// Nodal samples of the separable eigenfunction prod_a sin(k_a pi x_a / L_a).
inline GridFunction laplacian_eigenfunction(const Grid& grid, int kx, int ky = 1) {
  GridFunction g(grid);
  if (grid.dim() == 1) {
    for (int i = 0; i < grid.cells(0); ++i)
      g[i] = std::sin(kx * std::numbers::pi * grid.coord(i, 0) / grid.length(0));
  } else {
    for (int j = 0; j < grid.cells(1); ++j) {
      const double sy = std::sin(ky * std::numbers::pi * grid.coord(j, 1) / grid.length(1));
      for (int i = 0; i < grid.cells(0); ++i)
        g[grid.index(i, j)] =
            sy * std::sin(kx * std::numbers::pi * grid.coord(i, 0) / grid.length(0));
    }
  }
  return g;
}

/// Forward differences (s_{m+1} - s_m)/dt, one field per interval.
inline std::vector<GridFunction> discrete_time_derivative(const Trajectory& traj) {
  const double dt = traj.partition().dt();
  std::vector<GridFunction> diffs;
  diffs.reserve(static_cast<std::size_t>(traj.steps()));
  for (int m = 0; m < traj.steps(); ++m) {
    GridFunction d(traj.grid());
    const GridFunction& a = traj.state(m);
    const GridFunction& b = traj.state(m + 1);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (b[i] - a[i]) / dt;
    d.ensure_finite("discrete_time_derivative");
    diffs.push_back(std::move(d));
  }
  return diffs;
}

} // namespace stefanlab
