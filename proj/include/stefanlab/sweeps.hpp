// Parameter sweeps: solve the same problem across a ladder of regularization
// strengths, or across a ladder of source concentrations, and collect the
// estimate reports plus the cross-trajectory diagnostics. Points run through
// a small worker pool sized by the STEFANLAB_WORKERS environment variable
// (default 1); every point writes only its own slot, so results do not
// depend on the worker count.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stefanlab/diagnostics.hpp"
#include "stefanlab/estimates.hpp"
#include "stefanlab/solver.hpp"
#include "stefanlab/sources.hpp"

namespace stefanlab {

namespace detail {

inline int worker_count() {
  const char* env = std::getenv("STEFANLAB_WORKERS");
  if (!env) return 1;
  const int w = std::atoi(env);
  return std::min(std::max(w, 1), 16);
}

template <class Fn>
void parallel_for_index(int count, const Fn& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto drain = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

struct SweepOptions {
  EstimateOptions estimates;
  NewtonConfig newton;
  bool with_reference = true; // also solve without the extra dissipation
};

/// Least-squares slope of log(y) against log(x). Pairs with nonpositive y
/// are skipped; fewer than two usable pairs give NaN.
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ArgumentError("fit_loglog_slope: size mismatch");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw ArgumentError("fit_loglog_slope: x must be positive");
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nan("");
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return std::nan("");
  return (n * sxy - sx * sy) / det;
}

struct ViscositySweepResult {
  std::vector<double> n_values;
  std::vector<Trajectory> trajectories;    // parallel to n_values
  std::vector<EstimateReport> reports;     // parallel to n_values
  std::optional<Trajectory> reference;     // the unregularized solve
  std::optional<EstimateReport> reference_report;
  std::vector<double> cauchy_adjacent;     // sup_m H-1 distance, consecutive n
  std::vector<double> distance_to_reference; // per n, empty without reference

  /// Fitted d log(quantity) / d log(n) for a scalar drawn from each report.
  template <class Getter>
  double slope_against_n(const Getter& get) const {
    std::vector<double> ys;
    ys.reserve(reports.size());
    for (const auto& r : reports) ys.push_back(get(r));
    return fit_loglog_slope(n_values, ys);
  }
};

/// Solves the problem at each regularization strength in `n_values`
/// (ascending) and, when requested, once more with the dissipation switched
/// off as the limit reference.
inline ViscositySweepResult viscosity_sweep(const ProblemSpec& spec,
                                            const std::vector<double>& n_values,
                                            const SweepOptions& opts = {}) {
  if (n_values.empty()) throw ArgumentError("viscosity_sweep: empty strength list");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(n_values[i] > 0.0))
      throw ArgumentError("viscosity_sweep: strengths must be positive");
    if (i > 0 && !(n_values[i] > n_values[i - 1]))
      throw ArgumentError("viscosity_sweep: strengths must be strictly ascending");
  }

  const int points = static_cast<int>(n_values.size()) + (opts.with_reference ? 1 : 0);
  std::vector<std::optional<Trajectory>> slots(points);
  std::vector<EstimateReport> report_slots(points);
  detail::parallel_for_index(points, [&](int i) {
    const bool ref = i == static_cast<int>(n_values.size());
    const ViscosityParam visc =
        ref ? ViscosityParam::infinite() : ViscosityParam::finite(n_values[i]);
    Trajectory traj = solve(spec, visc, opts.newton);
    report_slots[i] = compute_estimates(traj, spec.nl, visc, opts.estimates);
    slots[i] = std::move(traj);
  });

  ViscositySweepResult out;
  out.n_values = n_values;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    out.trajectories.push_back(std::move(*slots[i]));
    out.reports.push_back(std::move(report_slots[i]));
  }
  if (opts.with_reference) {
    out.reference = std::move(*slots.back());
    out.reference_report = std::move(report_slots.back());
  }
  for (std::size_t i = 0; i + 1 < out.trajectories.size(); ++i)
    out.cauchy_adjacent.push_back(
        trajectory_distance_sup_Hm1(out.trajectories[i], out.trajectories[i + 1]));
  if (out.reference)
    for (const auto& traj : out.trajectories)
      out.distance_to_reference.push_back(trajectory_distance_sup_Hm1(traj, *out.reference));
  return out;
}

/// One rung of the concentration ladder: spatial width and temporal support
/// of the approximate point mass.
struct ConcentrationLevelSpec {
  double width = 0.0;
  double tau = 0.0;
};

struct ConcentrationLevel {
  ConcentrationLevelSpec spec;
  double injected_mass = 0.0; // space-time L1 of the realized source fields
  EstimateReport report;
};

struct ConcentrationSweepResult {
  std::vector<ConcentrationLevel> levels;

  /// Largest consecutive ratio of a scalar drawn from the reports; gauges
  /// whether a quantity stays bounded (near 1) or blows up along the ladder.
  template <class Getter>
  double max_adjacent_ratio(const Getter& get) const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      const double a = get(levels[i].report), b = get(levels[i + 1].report);
      if (!(a > 0.0)) throw NumericalError("max_adjacent_ratio: vanishing quantity");
      worst = std::max(worst, b / a);
    }
    return worst;
  }
};

/// Solves the same problem under a sharpening approximate point mass of
/// fixed space-time mass; the estimate reports show which norms stay
/// uniformly bounded under merely integrable data and which ones diverge.
inline ConcentrationSweepResult concentration_sweep(
    const Grid& grid, const TimePartition& partition, const Nonlinearity& nl,
    const GridFunction& u0, ViscosityParam visc, std::array<double, 2> center,
    double mass, const std::vector<ConcentrationLevelSpec>& levels,
    const SweepOptions& opts = {}) {
  if (levels.empty()) throw ArgumentError("concentration_sweep: empty level list");
  std::vector<std::optional<ConcentrationLevel>> slots(levels.size());
  detail::parallel_for_index(static_cast<int>(levels.size()), [&](int i) {
    ConcentrationLevel lvl;
    lvl.spec = levels[i];
    SourcePtr src =
        make_dirac_source(grid, partition, center, levels[i].width, mass, levels[i].tau);
    ProblemSpec spec(grid, partition, nl, u0, src);
    lvl.injected_mass = compute_data_constants(spec).f_L1;
    Trajectory traj = solve(spec, visc, opts.newton);
    lvl.report = compute_estimates(traj, nl, visc, opts.estimates);
    slots[i] = std::move(lvl);
  });
  ConcentrationSweepResult out;
  for (auto& s : slots) out.levels.push_back(std::move(*s));
  return out;
}

} // namespace stefanlab
