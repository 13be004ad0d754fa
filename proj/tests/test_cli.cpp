// Front-end plumbing: binary field files and their round trips, the flat
// config format with its validation messages, artifact determinism (a rerun
// from a written manifest reproduces the report byte for byte), and the
// in-process exit codes for the failure paths.
#include <catch2/catch_amalgamated.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "stefanlab/config.hpp"
#include "stefanlab/io.hpp"
#include "stefanlab/rng.hpp"
#include "stefanlab/runner.hpp"

using namespace stefanlab;
namespace fs = std::filesystem;

namespace {

// Unique scratch directory per test case, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("stefanlab_cli_" + tag + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool has_violation(const ValidationReport& rep, const std::string& needle) {
  for (const auto& v : rep.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

bool has_warning(const ValidationReport& rep, const std::string& needle) {
  for (const auto& w : rep.warnings)
    if (w.find(needle) != std::string::npos) return true;
  return false;
}

// A small well-formed solve problem; cheap enough to run repeatedly.
std::string small_solve_config() {
  return "mode = solve\n"
         "seed = 7\n"
         "problem.dim = 1\n"
         "problem.length_x = 1.0\n"
         "grid.cells_x = 24\n"
         "time.horizon = 0.1\n"
         "time.steps = 10\n"
         "phi.kind = stefan_plateau\n"
         "phi.plateau_lo = 0\n"
         "phi.plateau_hi = 1\n"
         "viscosity.n = 8\n"
         "initial.id = eigen\n"
         "initial.amplitude = 2.0\n"
         "source.id = eigen\n"
         "source.amplitude = 0.5\n"
         "exponents.r_list = 1.5\n"
         "exponents.k_list = 0.5\n";
}

} // namespace

TEST_CASE("binary field files round trip exactly", "[cli]") {
  TempDir dir("fields");
  const Grid grid = Grid::line(1.0, 33);
  auto rng = seeded_stream(0x10f11e5, "field io");
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  GridFunction g(grid);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = u(rng);
  g[0] = 0.0;
  g[1] = -0.0;
  g[2] = 1e-308;
  g[3] = 1.7976931348623157e308;

  write_field_bin(dir / "g.bin", g);
  const GridFunction back = read_field_bin(dir / "g.bin", grid);
  for (std::size_t i = 0; i < g.size(); ++i) {
    REQUIRE(back[i] == g[i]);
  }

  // Node-count mismatch and missing files both surface as file errors.
  REQUIRE_THROWS_AS(read_field_bin(dir / "g.bin", Grid::line(1.0, 32)), IoError);
  REQUIRE_THROWS_AS(read_field_bin(dir / "absent.bin", grid), IoError);

  // Trajectories restore state by state.
  const TimePartition part(0.5, 3);
  std::vector<GridFunction> states(4, g);
  states[2][5] = 42.0;
  const Trajectory traj(part, std::move(states));
  write_trajectory(dir.path, traj, "u");
  const Trajectory again = read_trajectory(dir.path, "u", grid, part);
  REQUIRE(again.state(2)[5] == 42.0);
  REQUIRE(again.state(3)[7] == g[7]);
}

TEST_CASE("shortest round-trip decimal text is exact", "[cli]") {
  auto rng = seeded_stream(0xdec1a1, "format doubles");
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 30);
  for (int i = 0; i < 2000; ++i) {
    const double v = mant(rng) * std::pow(10.0, expo(rng));
    const std::string text = detail::format_double(v);
    REQUIRE(std::stod(text) == v);
  }
  REQUIRE(detail::format_double(0.25) == "0.25");
  REQUIRE(detail::format_double(1.0) == "1");
  REQUIRE(detail::format_double(-0.1) == "-0.1");
}

TEST_CASE("flat config text parses with comments and strict structure", "[cli]") {
  const ConfigMap map = parse_config_text("# leading comment\n"
                                          "mode = solve   # trailing comment\n"
                                          "\n"
                                          "  grid.cells_x=16  \n"
                                          "time.horizon = 1.0\n");
  REQUIRE(map.values.at("mode") == "solve");
  REQUIRE(map.values.at("grid.cells_x") == "16");
  REQUIRE(map.values.size() == 3);

  // Canonical echo sorts keys and normalizes spacing, values stay verbatim.
  REQUIRE(map.canonical_text() ==
          "grid.cells_x = 16\nmode = solve\ntime.horizon = 1.0\n");

  REQUIRE_THROWS_AS(parse_config_text("mode solve\n"), ArgumentError);
  REQUIRE_THROWS_AS(parse_config_text("= solve\n"), ArgumentError);
  REQUIRE_THROWS_AS(parse_config_text("a = 1\na = 2\n"), ArgumentError);
  REQUIRE_THROWS_AS(load_config_file("/nonexistent/f.cfg"), IoError);
}

TEST_CASE("validation collects field-path violations", "[cli]") {
  SECTION("a complete solve config is clean") {
    const auto rep = validate_config(parse_config_text(small_solve_config()));
    REQUIRE(rep.ok());
    REQUIRE(rep.warnings.empty());
  }

  SECTION("missing and malformed fields are named") {
    const auto rep = validate_config(parse_config_text("mode = solve\n"
                                                       "grid.cells_x = none\n"
                                                       "time.steps = 4\n"));
    REQUIRE_FALSE(rep.ok());
    REQUIRE(has_violation(rep, "grid.cells_x"));
    REQUIRE(has_violation(rep, "time.horizon"));
  }

  SECTION("unknown mode and unknown keys") {
    const auto rep = validate_config(parse_config_text("mode = dance\n"));
    REQUIRE(has_violation(rep, "mode"));
    const auto rep2 = validate_config(
        parse_config_text(small_solve_config() + "grid.cellz = 3\n"));
    REQUIRE(rep2.ok());
    REQUIRE(has_warning(rep2, "grid.cellz"));
  }

  SECTION("custom phi must be monotone with a root at zero") {
    const std::string base = "mode = solve\ngrid.cells_x = 8\ntime.horizon = 1\n"
                             "time.steps = 2\nviscosity.n = 1\nphi.kind = custom\n";
    const auto rep = validate_config(parse_config_text(
        base + "phi.breakpoints = -1:-1, 0:0, 1:-0.5, 2:1\nphi.lipschitz = 1.5\n"));
    REQUIRE(has_violation(rep, "monotonicity"));
    const auto rep2 = validate_config(parse_config_text(
        base + "phi.breakpoints = -1:-0.5, 0:0.5, 1:1\nphi.lipschitz = 1\n"));
    REQUIRE(has_violation(rep2, "vanish"));
  }

  SECTION("space exponents at or above the critical line warn but pass") {
    const std::string cfg = "mode = solve\nproblem.dim = 2\ngrid.cells_x = 8\n"
                            "grid.cells_y = 8\ntime.horizon = 1\ntime.steps = 2\n"
                            "viscosity.n = 1\nexponents.r_list = 1.5 3.0\n";
    const auto rep = validate_config(parse_config_text(cfg));
    REQUIRE(rep.ok());
    REQUIRE(has_warning(rep, "above d/(d-1) threshold"));
  }

  SECTION("concentration sweeps need the point-mass source") {
    const auto rep = validate_config(parse_config_text(
        "mode = l1_sweep\nproblem.dim = 2\ngrid.cells_x = 8\ngrid.cells_y = 8\n"
        "time.horizon = 1\ntime.steps = 2\nviscosity.n = inf\n"
        "sweep.widths = 0.2 0.1\nsweep.taus = 0.04 0.01\n"));
    REQUIRE(has_violation(rep, "source.id"));
  }

  SECTION("sweep ladders must ascend") {
    const auto rep = validate_config(parse_config_text(
        "mode = visc_sweep\ngrid.cells_x = 8\ntime.horizon = 1\ntime.steps = 2\n"
        "sweep.n_list = 4 2 16\n"));
    REQUIRE(has_violation(rep, "sweep.n_list"));
  }

  SECTION("interpolation exponents are range-checked against the dimension") {
    const auto rep = validate_config(parse_config_text(
        small_solve_config() + "exponents.p_list = 1.2 1.6\n"));
    REQUIRE(has_violation(rep, "exponents.p_list"));
  }
}

TEST_CASE("assembled problems honor the configured data", "[cli]") {
  auto [cfg, rep] = interpret_config(parse_config_text(small_solve_config()));
  REQUIRE(rep.ok());
  const ProblemSpec spec = assemble_problem(cfg);
  REQUIRE(spec.grid.dim() == 1);
  REQUIRE(spec.grid.num_nodes() == 24);
  REQUIRE(spec.partition.steps() == 10);

  const GridFunction mode1 = laplacian_eigenfunction(spec.grid, 1);
  for (std::size_t i = 0; i < mode1.size(); ++i)
    REQUIRE_THAT(spec.initial[i], Catch::Matchers::WithinAbs(2.0 * mode1[i], 1e-14));

  REQUIRE(spec.nl(0.5) == 0.0);
  REQUIRE_THAT(spec.nl(1.5), Catch::Matchers::WithinAbs(0.5, 1e-14));
}

TEST_CASE("zero data produces identically zero functionals", "[cli]") {
  TempDir dir("zero");
  ConfigMap map = parse_config_text("mode = solve\ngrid.cells_x = 16\n"
                                    "time.horizon = 0.5\ntime.steps = 8\n"
                                    "viscosity.n = 4\n"
                                    "exponents.r_list = 2\nexponents.k_list = 1\n");
  const RunOutcome out = run(map, (dir / "run").string());
  REQUIRE(out.code == 0);

  const auto report = nlohmann::json::parse(slurp(dir / "run/report.json"));
  const auto& est = report.at("estimates");
  REQUIRE(est.at("u_L2H10").get<double>() == 0.0);
  REQUIRE(est.at("phi_u_L2H10").get<double>() == 0.0);
  REQUIRE(est.at("dtu_L2Hm1").get<double>() == 0.0);
  REQUIRE(est.at("u_LinfL1").get<double>() == 0.0);
  REQUIRE(est.at("visc_pairing").get<double>() == 0.0);
  REQUIRE(report.at("solver").at("max_residual").get<double>() == 0.0);

  const GridFunction last =
      read_field_bin(dir / "run/u_m000008.bin", Grid::line(1.0, 16));
  for (std::size_t i = 0; i < last.size(); ++i) REQUIRE(last[i] == 0.0);
}

TEST_CASE("a written manifest reruns to byte-identical artifacts", "[cli]") {
  TempDir dir("determinism");
  ConfigMap map = parse_config_text(small_solve_config());

  const RunOutcome first = run(map, (dir / "a").string());
  REQUIRE(first.code == 0);
  const RunOutcome second = run(map, (dir / "b").string());
  REQUIRE(second.code == 0);
  REQUIRE(slurp(dir / "a/report.json") == slurp(dir / "b/report.json"));
  REQUIRE(slurp(dir / "a/manifest.json") == slurp(dir / "b/manifest.json"));
  REQUIRE(slurp(dir / "a/u_m000010.bin") == slurp(dir / "b/u_m000010.bin"));

  // Loading the manifest itself must reproduce the run.
  const ConfigMap from_manifest = load_config_file(dir / "a/manifest.json");
  REQUIRE(from_manifest.canonical_text() == map.canonical_text());
  const RunOutcome third = run(from_manifest, (dir / "c").string());
  REQUIRE(third.code == 0);
  REQUIRE(slurp(dir / "a/report.json") == slurp(dir / "c/report.json"));
}

TEST_CASE("failure paths report their exit codes", "[cli]") {
  TempDir dir("codes");

  SECTION("validation failures return 2 and write nothing") {
    ConfigMap map = parse_config_text("mode = solve\ngrid.cells_x = 0\n");
    const RunOutcome out = run(map, (dir / "v").string());
    REQUIRE(out.code == 2);
    REQUIRE_FALSE(out.messages.empty());
    REQUIRE_FALSE(fs::exists(dir / "v/manifest.json"));
  }

  SECTION("a strangled iteration returns 3 and keeps the prefix") {
    // One undamped iteration cannot absorb a strong kick onto the plateau,
    // so the stepper gives up; the states computed so far stay on disk.
    ConfigMap map = parse_config_text("mode = solve\ngrid.cells_x = 12\n"
                                      "time.horizon = 1.0\ntime.steps = 4\n"
                                      "viscosity.n = inf\n"
                                      "initial.id = constant\ninitial.value = 0.9\n"
                                      "source.id = eigen\nsource.amplitude = 40\n"
                                      "newton.max_iter = 1\nnewton.picard_sweeps = 0\n"
                                      "newton.max_backtracks = 0\n");
    const RunOutcome out = run(map, (dir / "s").string());
    REQUIRE(out.code == 3);
    REQUIRE(fs::exists(dir / "s/manifest.json"));
    REQUIRE(fs::exists(dir / "s/u_m000000.bin"));
    const auto report = nlohmann::json::parse(slurp(dir / "s/report.json"));
    REQUIRE(report.contains("error"));
    REQUIRE(report.at("completed_steps").get<int>() < 4);
  }
}

TEST_CASE("trunclab mode records the comb verdicts", "[cli]") {
  TempDir dir("comb");
  ConfigMap map = parse_config_text("mode = trunclab\n"
                                    "trunclab.amplitude_exp = 1\n"
                                    "trunclab.n_list = 10 100 1000\n"
                                    "trunclab.p = 1\n"
                                    "exponents.k_list = 1\n");
  const RunOutcome out = run(map, (dir / "t").string());
  REQUIRE(out.code == 0);

  // Linear comb at p = 1: every truncation dies, yet the members keep unit
  // distance from the limit; the chain holds but gives no convergence.
  const auto report = nlohmann::json::parse(slurp(dir / "t/report.json"));
  const auto& strong = report.at("strong");
  REQUIRE(strong.at("chain_holds").get<bool>());
  REQUIRE(strong.at("truncations_converge").get<bool>());
  REQUIRE(strong.at("family_L1_trend").get<std::string>() == "flat");
  REQUIRE(report.at("weak").at("l1_trunc_trend").get<std::string>() == "vanishing");

  // The cubic comb concentrates mass n^2 and its pairings blow up.
  ConfigMap cubic = parse_config_text("mode = trunclab\n"
                                      "trunclab.amplitude_exp = 3\n"
                                      "trunclab.n_list = 10 100 1000\n"
                                      "trunclab.p = 1\n"
                                      "exponents.k_list = 1\n");
  const RunOutcome out3 = run(cubic, (dir / "t3").string());
  REQUIRE(out3.code == 0);
  const auto report3 = nlohmann::json::parse(slurp(dir / "t3/report.json"));
  REQUIRE(report3.at("weak").at("weak_pairing_trend").get<std::string>() == "diverging");
  REQUIRE_THAT(report3.at("members")[2].at("unit_mass").get<double>(),
               Catch::Matchers::WithinRel(1.0e6, 1e-12));
}

TEST_CASE("sweep artifacts carry the ladder columns", "[cli]") {
  TempDir dir("sweep");
  ConfigMap map = parse_config_text("mode = visc_sweep\nseed = 3\n"
                                    "grid.cells_x = 32\n"
                                    "time.horizon = 0.1\ntime.steps = 8\n"
                                    "phi.kind = stefan_plateau\n"
                                    "initial.id = eigen\ninitial.amplitude = 2\n"
                                    "sweep.n_list = 1 4 16\n"
                                    "exponents.k_list = 0.5\n");
  const RunOutcome out = run(map, (dir / "w").string());
  REQUIRE(out.code == 0);

  const std::string csv = slurp(dir / "w/sweep.csv");
  REQUIRE(csv.find("n,Phi_u_L1_max") == 0);
  REQUIRE(csv.find("tk_grad_k0.5") != std::string::npos);
  REQUIRE(csv.find("\ninf,") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(dir / "w/report.json"));
  REQUIRE(report.at("rows").size() == 3);
  REQUIRE(report.at("cauchy_adjacent").size() == 2);
  REQUIRE(fs::exists(dir / "w/final_n000002.bin"));
  REQUIRE(fs::exists(dir / "w/final_reference.bin"));

  // Rerunning the sweep from its manifest is also byte-stable.
  const ConfigMap again = load_config_file(dir / "w/manifest.json");
  const RunOutcome out2 = run(again, (dir / "w2").string());
  REQUIRE(out2.code == 0);
  REQUIRE(slurp(dir / "w/sweep.csv") == slurp(dir / "w2/sweep.csv"));
  REQUIRE(slurp(dir / "w/report.json") == slurp(dir / "w2/report.json"));
}
