// Manufactured exact solutions and the source fields that make the discrete
// scheme reproduce them, for convergence-order studies.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/nonlinearity.hpp"

namespace stefanlab {

/// Analytic space-time function with the derivatives the source formula
/// needs. y is ignored in 1D.
struct ManufacturedSolution {
  std::string name;
  std::function<double(double, double, double)> value; // u*(x, y, t)
  std::function<double(double, double, double)> time_derivative;
  std::function<double(double, double, double)> laplacian;
};

/// Registry of named solutions. "decay_sine" is exp(-t) prod_a sin(pi x_a / L_a),
/// optionally scaled as "decay_sine:<amplitude>".
inline ManufacturedSolution manufactured_solution(const std::string& name, const Grid& grid) {
  std::string base = name;
  double amp = 1.0;
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    base = name.substr(0, colon);
    try {
      amp = std::stod(name.substr(colon + 1));
    } catch (const std::exception&) {
      throw ArgumentError("manufactured_solution: bad amplitude in '" + name + "'");
    }
  }
  if (base != "decay_sine")
    throw ArgumentError("manufactured_solution: unknown name '" + base + "'");
  const int dim = grid.dim();
  const double lx = grid.length(0);
  const double ly = dim == 2 ? grid.length(1) : 1.0;
  const double pi = std::numbers::pi;
  auto shape = [dim, lx, ly, pi](double x, double y) {
    double s = std::sin(pi * x / lx);
    if (dim == 2) s *= std::sin(pi * y / ly);
    return s;
  };
  const double freq = dim == 2 ? (pi * pi) * (1.0 / (lx * lx) + 1.0 / (ly * ly))
                               : (pi * pi) / (lx * lx);
  ManufacturedSolution ms;
  ms.name = name;
  ms.value = [amp, shape](double x, double y, double t) {
    return amp * std::exp(-t) * shape(x, y);
  };
  ms.time_derivative = [amp, shape](double x, double y, double t) {
    return -amp * std::exp(-t) * shape(x, y);
  };
  ms.laplacian = [amp, shape, freq](double x, double y, double t) {
    return -freq * amp * std::exp(-t) * shape(x, y);
  };
  return ms;
}

/// Nodal samples of u*(., t).
inline GridFunction sample_manufactured(const ManufacturedSolution& ms, const Grid& grid,
                                        double t) {
  GridFunction g(grid);
  if (grid.dim() == 1) {
    for (int i = 0; i < grid.cells(0); ++i) g[i] = ms.value(grid.coord(i, 0), 0.0, t);
  } else {
    for (int j = 0; j < grid.cells(1); ++j)
      for (int i = 0; i < grid.cells(0); ++i)
        g[grid.index(i, j)] = ms.value(grid.coord(i, 0), grid.coord(j, 1), t);
  }
  return g;
}

/// Exact states at all partition nodes, for error measurement.
inline Trajectory manufactured_trajectory(const ManufacturedSolution& ms, const Grid& grid,
                                          const TimePartition& partition) {
  std::vector<GridFunction> states;
  states.reserve(partition.steps() + 1);
  for (int m = 0; m <= partition.steps(); ++m)
    states.push_back(sample_manufactured(ms, grid, partition.time(m)));
  return Trajectory(partition, std::move(states));
}

/// Source fields for steps m = 1..M together with generation warnings.
struct ManufacturedSource {
  std::vector<GridFunction> fields;
  std::vector<std::string> warnings;
};

namespace detail {

// Fourth-order second difference of phi(u*(., t)) along one axis, evaluated
// with off-grid analytic samples of u*.
inline double fd4_second_derivative(const std::function<double(double)>& g, double x,
                                    double delta) {
  return (-g(x - 2 * delta) + 16.0 * g(x - delta) - 30.0 * g(x) + 16.0 * g(x + delta) -
          g(x + 2 * delta)) /
         (12.0 * delta * delta);
}

inline bool stencil_crosses_knot(const Nonlinearity& nl, double umin, double umax) {
  for (double knot : nl.knots())
    if (umin < knot && umax > knot) return true;
  return false;
}

} // namespace detail

/// Builds f(., t_m) = dt u* - lap phi(u*) - inv_n lap u* for m = 1..M.
/// Where phi is affine over the sampled range of u* the composition is
/// differentiated analytically; otherwise a fourth-order finite difference
/// of phi(u*) is used (error O(delta^4) away from breakpoint crossings) and
/// a warning records every node whose difference stencil straddles a
/// breakpoint of phi.
inline ManufacturedSource manufactured_source(const ManufacturedSolution& ms,
                                              const Nonlinearity& nl, double inv_n,
                                              const Grid& grid,
                                              const TimePartition& partition) {
  ManufacturedSource out;
  out.fields.reserve(partition.steps());

  // Range of u* over the run, sampled at partition nodes.
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  for (int m = 0; m <= partition.steps(); ++m) {
    const GridFunction s = sample_manufactured(ms, grid, partition.time(m));
    for (double v : s.values()) {
      umin = std::min(umin, v);
      umax = std::max(umax, v);
    }
  }
  bool affine = true;
  for (double knot : nl.knots())
    if (umin < knot && umax > knot) affine = false;
  const double sigma = affine ? nl.slope(0.5 * (umin + umax)) : 0.0;

  long crossings = 0;
  for (int m = 1; m <= partition.steps(); ++m) {
    const double t = partition.time(m);
    GridFunction f(grid);
    for (int j = 0; j < (grid.dim() == 2 ? grid.cells(1) : 1); ++j) {
      const double y = grid.dim() == 2 ? grid.coord(j, 1) : 0.0;
      for (int i = 0; i < grid.cells(0); ++i) {
        const double x = grid.coord(i, 0);
        double lap_phi;
        if (affine) {
          lap_phi = sigma * ms.laplacian(x, y, t);
        } else {
          lap_phi = 0.0;
          for (int a = 0; a < grid.dim(); ++a) {
            const double delta = 1e-3 * std::max(1.0, grid.length(a));
            double smin = std::numeric_limits<double>::infinity(), smax = -smin;
            auto slice = [&](double r) {
              const double u = a == 0 ? ms.value(r, y, t) : ms.value(x, r, t);
              smin = std::min(smin, u);
              smax = std::max(smax, u);
              return nl(u);
            };
            const double at = a == 0 ? x : y;
            lap_phi += detail::fd4_second_derivative(slice, at, delta);
            if (detail::stencil_crosses_knot(nl, smin, smax)) ++crossings;
          }
        }
        const std::size_t p = grid.dim() == 2 ? grid.index(i, j) : grid.index(i);
        f[p] = ms.time_derivative(x, y, t) - lap_phi - inv_n * ms.laplacian(x, y, t);
      }
    }
    f.ensure_finite("manufactured_source");
    out.fields.push_back(std::move(f));
  }
  if (crossings > 0)
    out.warnings.push_back("manufactured_source: finite-difference stencil straddles a "
                           "breakpoint of phi at " +
                           std::to_string(crossings) +
                           " node evaluations; local error is first order there");
  return out;
}

} // namespace stefanlab
