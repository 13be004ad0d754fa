// Bookkeeping for the a priori bounds on one computed trajectory: the
// quantities the theory controls uniformly in the regularization strength
// (convex energy, flux gradient, time derivative in the dual norm, truncated
// flux energies) and the ones allowed to grow like sqrt(n) (the state's own
// gradient). All integrals use the volume-weighted nodal sums and the
// right-endpoint rule in time, matching the implicit scheme's energy
// identity: time quadrature runs over the states u_1, ..., u_M, suprema over
// all states including u_0.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/aux_functions.hpp"
#include "stefanlab/grid.hpp"
#include "stefanlab/norms.hpp"
#include "stefanlab/operators.hpp"
#include "stefanlab/rng.hpp"
#include "stefanlab/solver.hpp"

namespace stefanlab {

struct EstimateOptions {
  std::vector<double> lr_exponents;      // r values for || u ||_{L2(0,T;L^r)}
  std::vector<double> truncation_levels; // k values for the truncated-flux energy
  int eigen_probes = 5;                  // low eigenmodes testing the viscous pairing
  int random_probes = 3;
  std::uint64_t probe_seed = 0x05ca1ab1e5eedULL;
  QuadratureControl quadrature;          // for the beta primitive
};

/// Integral data entering the right-hand sides of the bounds.
struct DataConstants {
  double f_L1 = 0.0; // sum_m dt ||f_m||_{L1,h}, the space-time mass of the source
  double f_L2 = 0.0;
  double u0_L1 = 0.0;
  double u0_L2 = 0.0;
  double u0_H10 = 0.0;
  double Phi_u0_L1 = 0.0;    // convex energy of the initial state
  double domain_volume = 0.0; // interior measure h^d * (node count)
};

inline DataConstants compute_data_constants(const ProblemSpec& spec) {
  DataConstants dc;
  const int steps = spec.partition.steps();
  const double dt = spec.partition.dt();
  std::vector<GridFunction> fields;
  fields.reserve(steps);
  for (int m = 1; m <= steps; ++m) fields.push_back(spec.source->field(m));
  dc.f_L1 = bochner_norm_steps(fields, dt, NormSelector::L1(), 1.0);
  dc.f_L2 = bochner_norm_steps(fields, dt, NormSelector::L2(), 2.0);
  dc.u0_L1 = norm_Lp(spec.initial, 1.0);
  dc.u0_L2 = norm_Lp(spec.initial, 2.0);
  dc.u0_H10 = seminorm_H10(spec.initial);
  GridFunction energy(spec.grid);
  for (std::size_t i = 0; i < energy.size(); ++i)
    energy[i] = primitive_Phi(spec.nl, spec.initial[i]);
  dc.Phi_u0_L1 = norm_Lp(energy, 1.0);
  dc.domain_volume = spec.grid.cell_volume() * static_cast<double>(spec.grid.num_nodes());
  return dc;
}

struct EstimateReport {
  double Phi_u_L1_max = 0.0;  // sup_m of the convex energy int Phi(u_m)
  double phi_u_L2H10 = 0.0;   // flux gradient, bounded uniformly in n
  double u_L2H10 = 0.0;       // state gradient, expected to grow like sqrt(n)
  double dtu_L2Hm1 = 0.0;     // discrete time derivative in the dual norm
  double u_LinfL2 = 0.0;
  double u_LinfL1 = 0.0;
  double beta_grad_L2 = 0.0;  // gradient energy of beta(u), beta' = sqrt(psi')
  double visc_pairing = 0.0;  // (1/n) sup_v |sum_m dt <u_m, v>_H10| / |v|_H10
  std::vector<std::pair<double, double>> u_L2Lr; // (r, || u ||_{L2 Lr})
  std::vector<std::pair<double, double>> tk_grad; // (k, || T_k(phi(u)) ||_{L2 H10})

  double tk_grad_at(double k) const {
    for (const auto& [key, v] : tk_grad)
      if (key == k) return v;
    throw ArgumentError("EstimateReport: no truncation level " + std::to_string(k));
  }
  double u_L2Lr_at(double r) const {
    for (const auto& [key, v] : u_L2Lr)
      if (key == r) return v;
    throw ArgumentError("EstimateReport: no integrability exponent " + std::to_string(r));
  }
};

namespace detail {

// H10-normalized probe fields: the lowest Laplacian eigenmodes plus a few
// seeded rough fields. Returned together with their (negative) Laplacian
// images so each pairing costs one weighted dot product.
inline std::vector<GridFunction> pairing_probes(const Grid& grid, int eigen_probes,
                                                int random_probes, std::uint64_t seed) {
  std::vector<GridFunction> probes;
  if (grid.dim() == 1) {
    for (int k = 1; k <= eigen_probes; ++k)
      probes.push_back(laplacian_eigenfunction(grid, k));
  } else {
    std::vector<std::pair<double, std::pair<int, int>>> modes;
    for (int kx = 1; kx <= 3; ++kx)
      for (int ky = 1; ky <= 3; ++ky)
        modes.push_back({laplacian_eigenvalue(grid, kx, ky), {kx, ky}});
    std::sort(modes.begin(), modes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const int take = std::min<int>(eigen_probes, static_cast<int>(modes.size()));
    for (int i = 0; i < take; ++i)
      probes.push_back(
          laplacian_eigenfunction(grid, modes[i].second.first, modes[i].second.second));
  }
  for (int j = 0; j < random_probes; ++j) {
    auto gen = seeded_stream(seed, "pairing_probe_" + std::to_string(j));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    GridFunction g(grid);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = unif(gen);
    probes.push_back(std::move(g));
  }
  for (auto& v : probes) {
    const double s = seminorm_H10(v);
    if (s > 0.0)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] /= s;
  }
  return probes;
}

} // namespace detail

/// Measures every tracked quantity on one trajectory.
inline EstimateReport compute_estimates(const Trajectory& traj, const Nonlinearity& nl,
                                        ViscosityParam visc,
                                        const EstimateOptions& opts = {}) {
  const Grid& grid = traj.grid();
  const double dt = traj.partition().dt();
  const int steps = traj.steps();
  EstimateReport rep;

  // States u_1..u_M carry the time quadrature.
  std::vector<GridFunction> tail(traj.states().begin() + 1, traj.states().end());

  rep.u_L2H10 = bochner_norm_steps(tail, dt, NormSelector::H10(), 2.0);
  rep.u_LinfL2 = bochner_norm(traj, NormSelector::L2(), kInf);
  rep.u_LinfL1 = bochner_norm(traj, NormSelector::L1(), kInf);
  for (double r : opts.lr_exponents)
    rep.u_L2Lr.emplace_back(r, bochner_norm_steps(tail, dt, NormSelector::Lp(r), 2.0));

  for (int m = 0; m <= steps; ++m) {
    GridFunction energy(grid);
    for (std::size_t i = 0; i < energy.size(); ++i)
      energy[i] = primitive_Phi(nl, traj.state(m)[i]);
    rep.Phi_u_L1_max = std::max(rep.Phi_u_L1_max, norm_Lp(energy, 1.0));
  }

  std::vector<GridFunction> flux;
  flux.reserve(tail.size());
  for (const auto& s : tail) {
    GridFunction g(grid);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = nl(s[i]);
    flux.push_back(std::move(g));
  }
  rep.phi_u_L2H10 = bochner_norm_steps(flux, dt, NormSelector::H10(), 2.0);

  for (double k : opts.truncation_levels) {
    std::vector<GridFunction> tk;
    tk.reserve(flux.size());
    for (const auto& g : flux) {
      GridFunction t(grid);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = truncate(k, g[i]);
      tk.push_back(std::move(t));
    }
    rep.tk_grad.emplace_back(k, bochner_norm_steps(tk, dt, NormSelector::H10(), 2.0));
  }

  {
    std::vector<GridFunction> smoothed;
    smoothed.reserve(tail.size());
    for (const auto& s : tail) {
      GridFunction g(grid);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = beta_eval(s[i], opts.quadrature);
      smoothed.push_back(std::move(g));
    }
    rep.beta_grad_L2 = bochner_norm_steps(smoothed, dt, NormSelector::H10(), 2.0);
  }

  rep.dtu_L2Hm1 =
      bochner_norm_steps(discrete_time_derivative(traj), dt, NormSelector::Hm1(), 2.0);

  if (!visc.is_infinite()) {
    const auto probes = detail::pairing_probes(grid, opts.eigen_probes,
                                               opts.random_probes, opts.probe_seed);
    double worst = 0.0;
    for (const auto& v : probes) {
      const GridFunction lv = apply_laplacian(v);
      double acc = 0.0;
      for (const auto& s : tail) acc += dt * inner(s, lv);
      worst = std::max(worst, std::abs(acc));
    }
    rep.visc_pairing = visc.inv() * worst;
  }
  return rep;
}

} // namespace stefanlab
