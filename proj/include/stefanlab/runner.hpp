// Executes a validated run configuration and lays down its artifacts:
// manifest.json (enough to reproduce the run byte for byte), report.json
// (the mode's findings), sweep.csv for the sweep modes, and binary state
// files. Nothing here depends on wall-clock time or machine identity, so a
// rerun from the manifest reproduces identical bytes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "stefanlab/acceptance.hpp"
#include "stefanlab/config.hpp"
#include "stefanlab/diagnostics.hpp"
#include "stefanlab/estimates.hpp"
#include "stefanlab/io.hpp"
#include "stefanlab/solver.hpp"
#include "stefanlab/sweeps.hpp"
#include "stefanlab/trunclab.hpp"

namespace stefanlab {

constexpr const char* kFormatVersion = "0.1.0";

struct RunOutcome {
  int code = 0; // 0 ok, 2 validation, 3 solver failure, 4 failed acceptance
  std::vector<std::string> messages;
};

namespace detail {

inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline nlohmann::ordered_json estimates_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["Phi_u_L1_max"] = r.Phi_u_L1_max;
  j["phi_u_L2H10"] = r.phi_u_L2H10;
  j["u_L2H10"] = r.u_L2H10;
  j["dtu_L2Hm1"] = r.dtu_L2Hm1;
  j["u_LinfL2"] = r.u_LinfL2;
  j["u_LinfL1"] = r.u_LinfL1;
  j["beta_grad_L2"] = r.beta_grad_L2;
  j["visc_pairing"] = r.visc_pairing;
  nlohmann::ordered_json tk = nlohmann::ordered_json::array();
  for (const auto& [k, v] : r.tk_grad) tk.push_back({{"k", k}, {"value", v}});
  j["tk_grad_L2"] = std::move(tk);
  nlohmann::ordered_json lr = nlohmann::ordered_json::array();
  for (const auto& [rr, v] : r.u_L2Lr) lr.push_back({{"r", rr}, {"value", v}});
  j["u_L2Lr"] = std::move(lr);
  return j;
}

inline nlohmann::ordered_json constants_json(const DataConstants& dc) {
  nlohmann::ordered_json j;
  j["f_L1"] = dc.f_L1;
  j["f_L2"] = dc.f_L2;
  j["u0_L1"] = dc.u0_L1;
  j["u0_L2"] = dc.u0_L2;
  j["u0_H10"] = dc.u0_H10;
  j["Phi_u0_L1"] = dc.Phi_u0_L1;
  j["domain_volume"] = dc.domain_volume;
  return j;
}

inline nlohmann::ordered_json manifest_json(const ConfigMap& map, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["mode"] = mode_name(cfg.mode);
  j["seed"] = cfg.seed;
  const std::string text = map.canonical_text();
  j["config_hash"] = "fnv1a:" + fnv1a_hex(text);
  j["config_text"] = text;
  if (cfg.mode == RunMode::solve || cfg.mode == RunMode::visc_sweep ||
      cfg.mode == RunMode::l1_sweep) {
    nlohmann::ordered_json p;
    p["dim"] = cfg.dim;
    p["cells"] = cfg.dim == 1 ? nlohmann::ordered_json::array({cfg.cells_x})
                              : nlohmann::ordered_json::array({cfg.cells_x, cfg.cells_y});
    p["lengths"] = cfg.dim == 1 ? nlohmann::ordered_json::array({cfg.length_x})
                                : nlohmann::ordered_json::array({cfg.length_x, cfg.length_y});
    p["horizon"] = cfg.horizon;
    p["steps"] = cfg.steps;
    p["phi"] = cfg.phi_kind;
    p["viscosity"] = cfg.visc_infinite ? "inf" : format_double(cfg.visc_n);
    j["problem"] = std::move(p);
  }
  return j;
}

inline nlohmann::ordered_json report_head(const ConfigMap& map, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["mode"] = mode_name(cfg.mode);
  j["seed"] = cfg.seed;
  j["config_hash"] = "fnv1a:" + fnv1a_hex(map.canonical_text());
  return j;
}

inline EstimateOptions estimate_options(const RunConfig& cfg) {
  EstimateOptions opts;
  if (!cfg.r_list.empty()) opts.lr_exponents = cfg.r_list;
  if (!cfg.k_list.empty()) opts.truncation_levels = cfg.k_list;
  opts.probe_seed = cfg.seed;
  return opts;
}

inline ViscosityParam viscosity_from(const RunConfig& cfg) {
  return cfg.visc_infinite ? ViscosityParam::infinite() : ViscosityParam::finite(cfg.visc_n);
}

// One CSV cell per estimate column; the header lists the truncation levels
// and space exponents actually configured, so rows stay self-describing.
inline std::string estimate_csv_header(const EstimateReport& sample) {
  std::string h = "Phi_u_L1_max,phi_u_L2H10,u_L2H10,dtu_L2Hm1,u_LinfL2,u_LinfL1,"
                  "beta_grad_L2,visc_pairing";
  for (const auto& [k, v] : sample.tk_grad) h += ",tk_grad_k" + format_double(k);
  for (const auto& [r, v] : sample.u_L2Lr) h += ",u_L2Lr_r" + format_double(r);
  return h;
}

inline std::string estimate_csv_row(const EstimateReport& r) {
  std::string row = format_double(r.Phi_u_L1_max) + "," + format_double(r.phi_u_L2H10) +
                    "," + format_double(r.u_L2H10) + "," + format_double(r.dtu_L2Hm1) +
                    "," + format_double(r.u_LinfL2) + "," + format_double(r.u_LinfL1) +
                    "," + format_double(r.beta_grad_L2) + "," +
                    format_double(r.visc_pairing);
  for (const auto& [k, v] : r.tk_grad) row += "," + format_double(v);
  for (const auto& [rr, v] : r.u_L2Lr) row += "," + format_double(v);
  return row;
}

inline int run_solve(const RunConfig& cfg, const std::filesystem::path& dir,
                     nlohmann::ordered_json& report, RunOutcome& out) {
  const ProblemSpec spec = assemble_problem(cfg);
  report["data_constants"] = constants_json(compute_data_constants(spec));

  // States stream to disk as they are computed, so a failed run leaves the
  // completed prefix of the trajectory behind.
  std::vector<GridFunction> states;
  states.reserve(spec.partition.steps() + 1);
  states.push_back(spec.initial);
  write_field_bin(dir / ("u_m" + step_tag(0) + ".bin"), spec.initial);
  ImplicitStepper stepper(spec, viscosity_from(cfg), cfg.newton);
  SolveReport solver;
  try {
    for (int m = 1; m <= spec.partition.steps(); ++m) {
      StepReport sr;
      states.push_back(stepper.step(states.back(), spec.source->field(m), m, &sr));
      write_field_bin(dir / ("u_m" + step_tag(m) + ".bin"), states.back());
      solver.total_newton_iters += sr.newton_iters;
      solver.total_picard_rounds += sr.picard_rounds;
      solver.max_iters_one_step = std::max(solver.max_iters_one_step, sr.newton_iters);
      solver.max_residual = std::max(solver.max_residual, sr.residual);
    }
  } catch (const ConvergenceError& e) {
    report["error"] = e.what();
    report["completed_steps"] = static_cast<int>(states.size()) - 1;
    out.messages.push_back(std::string("solver failure: ") + e.what());
    return 3;
  } catch (const NumericalError& e) {
    report["error"] = e.what();
    report["completed_steps"] = static_cast<int>(states.size()) - 1;
    out.messages.push_back(std::string("solver failure: ") + e.what());
    return 3;
  }

  nlohmann::ordered_json sj;
  sj["total_newton_iters"] = solver.total_newton_iters;
  sj["total_picard_rounds"] = solver.total_picard_rounds;
  sj["max_iters_one_step"] = solver.max_iters_one_step;
  sj["max_residual"] = solver.max_residual;
  report["solver"] = std::move(sj);

  const Trajectory traj(spec.partition, std::move(states));
  report["estimates"] =
      estimates_json(compute_estimates(traj, spec.nl, viscosity_from(cfg),
                                       estimate_options(cfg)));
  write_field_csv(dir / "final_state.csv", traj.state(traj.steps()));
  nlohmann::ordered_json art;
  art["state_stem"] = "u";
  art["state_count"] = traj.steps() + 1;
  report["artifacts"] = std::move(art);
  return 0;
}

inline int run_visc_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                          nlohmann::ordered_json& report, RunOutcome& out) {
  const ProblemSpec spec = assemble_problem(cfg);
  const Nonlinearity nl = assemble_phi(cfg);
  SweepOptions opts;
  opts.estimates = estimate_options(cfg);
  opts.newton = cfg.newton;
  opts.with_reference = true;

  ViscositySweepResult sweep;
  try {
    sweep = viscosity_sweep(spec, cfg.sweep_n, opts);
  } catch (const ConvergenceError& e) {
    report["error"] = e.what();
    out.messages.push_back(std::string("solver failure: ") + e.what());
    return 3;
  } catch (const NumericalError& e) {
    report["error"] = e.what();
    out.messages.push_back(std::string("solver failure: ") + e.what());
    return 3;
  }

  const double minty_k = cfg.k_list.empty() ? 1.0 : cfg.k_list.front();
  std::vector<double> minty, equi;
  for (std::size_t i = 0; i < sweep.trajectories.size(); ++i) {
    minty.push_back(
        truncation_gap(sweep.trajectories[i], *sweep.reference, nl, minty_k).pairing_L1);
    equi.push_back(equicontinuity_modulus(sweep.trajectories[i]).modulus);
    write_field_bin(dir / ("final_n" + step_tag(static_cast<int>(i)) + ".bin"),
                    sweep.trajectories[i].state(sweep.trajectories[i].steps()));
  }
  write_field_bin(dir / "final_reference.bin",
                  sweep.reference->state(sweep.reference->steps()));

  std::string csv = "n," + estimate_csv_header(sweep.reports.front()) +
                    ",cauchy_to_prev,minty_vs_ref,equicont_modulus\n";
  for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
    csv += format_double(sweep.n_values[i]) + "," + estimate_csv_row(sweep.reports[i]);
    csv += ",";
    if (i > 0) csv += format_double(sweep.cauchy_adjacent[i - 1]);
    csv += "," + format_double(minty[i]) + "," + format_double(equi[i]) + "\n";
  }
  csv += "inf," + estimate_csv_row(*sweep.reference_report) + ",,,\n";
  write_text(dir / "sweep.csv", csv);

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
    nlohmann::ordered_json row;
    row["n"] = sweep.n_values[i];
    row["estimates"] = estimates_json(sweep.reports[i]);
    row["minty_vs_ref"] = minty[i];
    row["equicont_modulus"] = equi[i];
    row["distance_to_ref"] = sweep.distance_to_reference[i];
    rows.push_back(std::move(row));
  }
  report["rows"] = std::move(rows);
  report["reference_estimates"] = estimates_json(*sweep.reference_report);
  report["cauchy_adjacent"] = sweep.cauchy_adjacent;
  report["minty_truncation_level"] = minty_k;
  nlohmann::ordered_json slopes;
  slopes["u_L2H10"] =
      sweep.slope_against_n([](const EstimateReport& r) { return r.u_L2H10; });
  slopes["phi_u_L2H10"] =
      sweep.slope_against_n([](const EstimateReport& r) { return r.phi_u_L2H10; });
  slopes["dtu_L2Hm1"] =
      sweep.slope_against_n([](const EstimateReport& r) { return r.dtu_L2Hm1; });
  report["loglog_slopes"] = std::move(slopes);
  return 0;
}

inline int run_l1_sweep(const RunConfig& cfg, const std::filesystem::path& dir,
                        nlohmann::ordered_json& report, RunOutcome& out) {
  const Grid grid = assemble_grid(cfg);
  const TimePartition part(cfg.horizon, cfg.steps);
  const Nonlinearity nl = assemble_phi(cfg);
  const GridFunction u0 = assemble_initial(cfg, grid);
  SweepOptions opts;
  opts.estimates = estimate_options(cfg);
  opts.newton = cfg.newton;
  std::vector<ConcentrationLevelSpec> levels;
  for (std::size_t i = 0; i < cfg.sweep_widths.size(); ++i)
    levels.push_back({cfg.sweep_widths[i], cfg.sweep_taus[i]});

  ConcentrationSweepResult sweep;
  try {
    sweep = concentration_sweep(grid, part, nl, u0, viscosity_from(cfg),
                                {cfg.source_center_x, cfg.source_center_y},
                                cfg.source_mass, levels, opts);
  } catch (const ConvergenceError& e) {
    report["error"] = e.what();
    out.messages.push_back(std::string("solver failure: ") + e.what());
    return 3;
  } catch (const NumericalError& e) {
    report["error"] = e.what();
    out.messages.push_back(std::string("solver failure: ") + e.what());
    return 3;
  }

  std::string csv =
      "width,tau,injected_mass," + estimate_csv_header(sweep.levels.front().report) + "\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sweep.levels.size(); ++i) {
    const auto& lvl = sweep.levels[i];
    csv += format_double(lvl.spec.width) + "," + format_double(lvl.spec.tau) + "," +
           format_double(lvl.injected_mass) + "," + estimate_csv_row(lvl.report) + "\n";
    nlohmann::ordered_json row;
    row["width"] = lvl.spec.width;
    row["tau"] = lvl.spec.tau;
    row["injected_mass"] = lvl.injected_mass;
    row["estimates"] = estimates_json(lvl.report);
    rows.push_back(std::move(row));
  }
  write_text(dir / "sweep.csv", csv);
  report["levels"] = std::move(rows);
  return 0;
}

inline int run_verify(const std::filesystem::path&, nlohmann::ordered_json& report,
                      RunOutcome& out) {
  const std::vector<acceptance::CriterionResult> results = acceptance::run_acceptance();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    nlohmann::ordered_json row;
    row["id"] = r.id;
    row["name"] = r.name;
    row["passed"] = r.passed;
    row["seconds"] = r.seconds;
    row["detail"] = r.detail;
    rows.push_back(std::move(row));
    all = all && r.passed;
    out.messages.push_back(std::string(r.passed ? "PASS " : "FAIL ") +
                           std::to_string(r.id) + ": " + r.name +
                           (r.detail.empty() ? "" : " | " + r.detail));
  }
  report["criteria"] = std::move(rows);
  report["all_passed"] = all;
  return all ? 0 : 4;
}

inline nlohmann::ordered_json verdict_json(const TruncationLemmaVerdict& v) {
  nlohmann::ordered_json j;
  j["family"] = v.family;
  j["limit"] = v.limit;
  j["p"] = v.p;
  j["uniform_Lp_bound"] = v.uniform_Lp_bound;
  nlohmann::ordered_json chain = nlohmann::ordered_json::array();
  for (const auto& e : v.chain)
    chain.push_back({{"scale", e.scale}, {"k", e.k}, {"lhs", e.lhs}, {"rhs", e.rhs},
                     {"ok", e.ok}});
  j["chain"] = std::move(chain);
  nlohmann::ordered_json trends = nlohmann::ordered_json::array();
  for (const auto& g : v.gap_trends)
    trends.push_back({{"k", g.k}, {"q", g.q}, {"gaps", g.gaps}, {"trend", g.trend},
                      {"interpolation_ok", g.interpolation_ok}});
  j["gap_trends"] = std::move(trends);
  j["member_L1_gaps"] = v.member_L1_gaps;
  j["family_L1_trend"] = v.family_L1_trend;
  j["chain_holds"] = v.chain_holds;
  j["truncations_converge"] = v.truncations_converge;
  j["interpolation_holds"] = v.interpolation_holds;
  return j;
}

inline int run_trunclab(const RunConfig& cfg, nlohmann::ordered_json& report,
                        RunOutcome& out) {
  const CombFamily family(cfg.trunclab_amplitude_exp, cfg.trunclab_n);
  const FamilyLimit limit = FamilyLimit::of_constant(cfg.trunclab_limit);

  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  for (int j = 0; j < family.size(); ++j)
    members.push_back({{"scale", family.scale(j)},
                       {"unit_mass", family.member_Lp_pow(j, 1.0)}});
  report["family"] = family.describe();
  report["members"] = std::move(members);

  try {
    const TruncationLemmaVerdict verdict = check_strong_truncation_lemma(
        family, limit, cfg.trunclab_p, cfg.k_list, cfg.trunclab_q);
    report["strong"] = verdict_json(verdict);
    out.messages.push_back(std::string("strong route: ") +
                           (verdict.truncations_converge ? "converging" : "obstructed"));
  } catch (const ArgumentError& e) {
    report["strong"] = {{"rejected", e.what()}};
    out.messages.push_back(std::string("strong route rejected: ") + e.what());
  }

  const double weak_k = cfg.k_list.empty() ? 1.0 : cfg.k_list.front();
  const WeakLimitReport weak = weak_limit_report(family, limit, weak_k);
  nlohmann::ordered_json wj;
  wj["k"] = weak.k;
  wj["scales"] = weak.scales;
  nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
  for (const auto& g : weak.pairing_gaps)
    gaps.push_back(nlohmann::ordered_json::array({g[0], g[1], g[2]}));
  wj["pairing_gaps"] = std::move(gaps);
  wj["trunc_L1"] = weak.trunc_L1;
  wj["weak_pairing_trend"] = weak.weak_pairing_trend;
  wj["l1_trunc_trend"] = weak.l1_trunc_trend;
  report["weak"] = std::move(wj);
  out.messages.push_back("weak pairings: " + weak.weak_pairing_trend);
  return 0;
}

} // namespace detail

/// Validates, then executes the configured mode, writing all artifacts into
/// the output directory. `out_override` replaces the configured output_dir
/// when nonempty. Validation failures write nothing and return code 2.
inline RunOutcome run(const ConfigMap& map, const std::string& out_override = "") {
  RunOutcome out;
  auto [cfg, rep] = interpret_config(map);
  for (const auto& w : rep.warnings) out.messages.push_back("warning: " + w);
  if (!rep.ok()) {
    for (const auto& v : rep.violations) out.messages.push_back("violation: " + v);
    out.code = 2;
    return out;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;

  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  detail::write_json(dir / "manifest.json", detail::manifest_json(map, cfg));

  nlohmann::ordered_json report = detail::report_head(map, cfg);
  switch (cfg.mode) {
    case RunMode::solve:
      out.code = detail::run_solve(cfg, dir, report, out);
      break;
    case RunMode::visc_sweep:
      out.code = detail::run_visc_sweep(cfg, dir, report, out);
      break;
    case RunMode::l1_sweep:
      out.code = detail::run_l1_sweep(cfg, dir, report, out);
      break;
    case RunMode::verify:
      out.code = detail::run_verify(dir, report, out);
      break;
    case RunMode::trunclab:
      out.code = detail::run_trunclab(cfg, report, out);
      break;
  }
  detail::write_json(dir / "report.json", report);
  return out;
}

} // namespace stefanlab
