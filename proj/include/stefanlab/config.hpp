// Run configuration: a flat key = value text format with dotted section
// names, '#' comments, and no nesting or programmability. Interpretation
// collects violations with field-path messages instead of stopping at the
// first one; a config builds domain objects only after it validates.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/errors.hpp"
#include "stefanlab/io.hpp"
#include "stefanlab/nonlinearity.hpp"
#include "stefanlab/operators.hpp"
#include "stefanlab/solver.hpp"
#include "stefanlab/sources.hpp"

namespace stefanlab {

/// Parsed flat config: dotted keys mapped to raw value text, duplicates
/// rejected. `canonical_text()` is the normalized echo used for hashing and
/// manifests: sorted keys, single spacing, trailing newline.
struct ConfigMap {
  std::map<std::string, std::string> values;

  std::string canonical_text() const {
    std::string out;
    for (const auto& [k, v] : values) {
      out += k;
      out += " = ";
      out += v;
      out += '\n';
    }
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

} // namespace detail

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("config line " + std::to_string(lineno) +
                          ": expected 'key = value', got '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ArgumentError("config line " + std::to_string(lineno) + ": empty key");
    if (map.values.count(key))
      throw ArgumentError("config line " + std::to_string(lineno) + ": duplicate key '" +
                          key + "'");
    map.values.emplace(std::move(key), std::move(value));
  }
  return map;
}

/// Reads a config file. A file whose first significant byte is '{' is taken
/// for a run manifest; its "config_text" entry is extracted, so a manifest
/// reruns the exact configuration that produced it.
inline ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    // Minimal manifest extraction: locate the "config_text" string value.
    const auto key = text.find("\"config_text\"");
    if (key == std::string::npos)
      throw IoError("manifest " + path.string() + " has no config_text entry");
    auto q = text.find('"', text.find(':', key) + 1);
    if (q == std::string::npos)
      throw IoError("manifest " + path.string() + " has a malformed config_text entry");
    std::string raw;
    for (std::size_t i = q + 1; i < text.size(); ++i) {
      if (text[i] == '\\' && i + 1 < text.size()) {
        const char c = text[++i];
        if (c == 'n') raw += '\n';
        else if (c == 't') raw += '\t';
        else raw += c;
        continue;
      }
      if (text[i] == '"') return parse_config_text(raw);
      raw += text[i];
    }
    throw IoError("manifest " + path.string() + " has an unterminated config_text entry");
  }
  return parse_config_text(text);
}

enum class RunMode { solve, visc_sweep, l1_sweep, verify, trunclab };

inline std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::solve: return "solve";
    case RunMode::visc_sweep: return "visc_sweep";
    case RunMode::l1_sweep: return "l1_sweep";
    case RunMode::verify: return "verify";
    case RunMode::trunclab: return "trunclab";
  }
  return "?";
}

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

/// Typed view of a validated config. Fields irrelevant to the mode keep
/// their defaults.
struct RunConfig {
  RunMode mode = RunMode::solve;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  int dim = 1;
  double length_x = 1.0, length_y = 1.0;
  int cells_x = 0, cells_y = 0;
  double horizon = 1.0;
  int steps = 0;

  std::string phi_kind = "stefan_plateau";
  double phi_slope = 1.0;
  double phi_lo = 0.0, phi_hi = 1.0;
  std::string phi_breakpoints;
  double phi_lipschitz = 1.0, phi_z0 = 1.0, phi_z1 = 1.0;

  bool visc_infinite = false;
  double visc_n = 16.0;

  std::string source_id = "zero";
  double source_amplitude = 1.0;
  double source_mass = 1.0, source_width = 0.1, source_tau = 0.1;
  double source_center_x = 0.5, source_center_y = 0.5;
  std::string source_dir;

  std::string initial_id = "zero";
  double initial_value = 0.0;
  double initial_amplitude = 1.0, initial_offset = 0.0;
  int initial_mode_x = 1, initial_mode_y = 1;
  std::string initial_path;

  std::vector<double> sweep_n;
  std::vector<double> sweep_widths, sweep_taus;

  std::vector<double> r_list, p_list, k_list;

  NewtonConfig newton;

  double trunclab_amplitude_exp = 1.0;
  std::vector<int> trunclab_n{10, 100, 1000};
  double trunclab_p = 1.0;
  std::vector<double> trunclab_q{1.0};
  double trunclab_limit = 0.0;
};

namespace detail {

// Pulls typed values out of the flat map, recording violations under the
// exact key path and remembering which keys were touched.
class ConfigReader {
public:
  ConfigReader(const ConfigMap& map, ValidationReport& rep) : map_(map), rep_(rep) {}

  std::optional<std::string> raw(const std::string& key) {
    consumed_.insert(key);
    const auto it = map_.values.find(key);
    if (it == map_.values.end()) return std::nullopt;
    return it->second;
  }

  std::string word(const std::string& key, const std::string& fallback) {
    const auto v = raw(key);
    return v ? *v : fallback;
  }

  double number(const std::string& key, double fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const double d = std::stod(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing text");
      return d;
    } catch (const std::exception&) {
      violation(key + ": expected a number, got '" + *v + "'");
      return fallback;
    }
  }

  int integer(const std::string& key, int fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const long l = std::stol(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing text");
      return static_cast<int>(l);
    } catch (const std::exception&) {
      violation(key + ": expected an integer, got '" + *v + "'");
      return fallback;
    }
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const unsigned long long l = std::stoull(*v, &used);
      if (used != v->size() || v->front() == '-') throw std::invalid_argument("sign");
      return l;
    } catch (const std::exception&) {
      violation(key + ": expected a nonnegative integer, got '" + *v + "'");
      return fallback;
    }
  }

  std::vector<double> number_list(const std::string& key) {
    std::vector<double> out;
    const auto v = raw(key);
    if (!v) return out;
    std::istringstream in(*v);
    std::string item;
    while (in >> item) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        violation(key + ": expected numbers, got '" + item + "'");
        return {};
      }
    }
    return out;
  }

  std::vector<int> integer_list(const std::string& key) {
    std::vector<int> out;
    for (double d : number_list(key)) {
      const int i = static_cast<int>(d);
      if (static_cast<double>(i) != d) {
        violation(key + ": expected integers");
        return {};
      }
      out.push_back(i);
    }
    return out;
  }

  void violation(const std::string& msg) { rep_.violations.push_back(msg); }
  void warning(const std::string& msg) { rep_.warnings.push_back(msg); }

  void warn_unconsumed() {
    for (const auto& [k, v] : map_.values)
      if (!consumed_.count(k)) warning(k + ": unrecognized key, ignored");
  }

private:
  const ConfigMap& map_;
  ValidationReport& rep_;
  std::set<std::string> consumed_;
};

inline bool ascending_positive(const std::vector<double>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) return false;
    if (i > 0 && !(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

} // namespace detail

/// Interprets and validates in one pass. The returned config is meaningful
/// only when the report has no violations.
inline std::pair<RunConfig, ValidationReport> interpret_config(const ConfigMap& map) {
  RunConfig c;
  ValidationReport rep;
  detail::ConfigReader r(map, rep);

  const std::string mode = r.word("mode", "");
  if (mode == "solve") c.mode = RunMode::solve;
  else if (mode == "visc_sweep") c.mode = RunMode::visc_sweep;
  else if (mode == "l1_sweep") c.mode = RunMode::l1_sweep;
  else if (mode == "verify") c.mode = RunMode::verify;
  else if (mode == "trunclab") c.mode = RunMode::trunclab;
  else if (mode.empty()) r.violation("mode: required, one of solve|visc_sweep|l1_sweep|verify|trunclab");
  else r.violation("mode: unknown value '" + mode + "'");

  c.seed = r.unsigned_integer("seed", 0);
  c.output_dir = r.word("output_dir", "out");

  const bool needs_problem = c.mode == RunMode::solve || c.mode == RunMode::visc_sweep ||
                             c.mode == RunMode::l1_sweep;

  if (needs_problem) {
    c.dim = r.integer("problem.dim", 1);
    if (c.dim != 1 && c.dim != 2) r.violation("problem.dim: must be 1 or 2");
    c.length_x = r.number("problem.length_x", 1.0);
    if (!(c.length_x > 0.0)) r.violation("problem.length_x: must be positive");
    if (c.dim == 2) {
      c.length_y = r.number("problem.length_y", 1.0);
      if (!(c.length_y > 0.0)) r.violation("problem.length_y: must be positive");
    }
    c.cells_x = r.integer("grid.cells_x", 0);
    if (c.cells_x < 1) r.violation("grid.cells_x: must be at least 1");
    if (c.dim == 2) {
      c.cells_y = r.integer("grid.cells_y", 0);
      if (c.cells_y < 1) r.violation("grid.cells_y: must be at least 1");
    }
    c.horizon = r.number("time.horizon", 0.0);
    if (!(c.horizon > 0.0)) r.violation("time.horizon: must be positive");
    c.steps = r.integer("time.steps", 0);
    if (c.steps < 1) r.violation("time.steps: must be at least 1");

    c.phi_kind = r.word("phi.kind", "stefan_plateau");
    if (c.phi_kind == "linear") {
      c.phi_slope = r.number("phi.slope", 1.0);
      if (!(c.phi_slope > 0.0)) r.violation("phi.slope: must be positive");
    } else if (c.phi_kind == "stefan_plateau") {
      c.phi_lo = r.number("phi.plateau_lo", 0.0);
      c.phi_hi = r.number("phi.plateau_hi", 1.0);
      if (!(c.phi_lo < c.phi_hi))
        r.violation("phi.plateau_lo: plateau needs plateau_lo < plateau_hi");
    } else if (c.phi_kind == "custom") {
      c.phi_breakpoints = r.word("phi.breakpoints", "");
      c.phi_lipschitz = r.number("phi.lipschitz", 1.0);
      c.phi_z0 = r.number("phi.z0", 1.0);
      c.phi_z1 = r.number("phi.z1", 1.0);
      if (c.phi_breakpoints.empty()) {
        r.violation("phi.breakpoints: required for phi.kind = custom");
      } else {
        // Name the failed structural hypothesis instead of letting the
        // constructor throw: monotone slopes, a root at zero, declared
        // Lipschitz constant, sublinear growth witnesses.
        try {
          Nonlinearity nl = Nonlinearity::parse(c.phi_breakpoints, c.phi_lipschitz,
                                                c.phi_z0, c.phi_z1);
          (void)nl;
        } catch (const ArgumentError& e) {
          std::string what = e.what();
          if (what.find("decreasing segment") != std::string::npos)
            r.violation("phi.breakpoints: a segment has negative slope, breaking the "
                        "monotonicity hypothesis (" + what + ")");
          else if (what.find("must vanish") != std::string::npos)
            r.violation("phi.breakpoints: the function must vanish at zero (" + what + ")");
          else if (what.find("sublinear") != std::string::npos ||
                   what.find("z1") != std::string::npos || what.find("z0") != std::string::npos)
            r.violation("phi: sublinear growth witnesses rejected (" + what + ")");
          else
            r.violation("phi: " + what);
        }
      }
    } else {
      r.violation("phi.kind: unknown value '" + c.phi_kind + "'");
    }

    const std::string visc = r.word("viscosity.n", "inf");
    if (visc == "inf") {
      c.visc_infinite = true;
    } else {
      c.visc_infinite = false;
      try {
        std::size_t used = 0;
        c.visc_n = std::stod(visc, &used);
        if (used != visc.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        r.violation("viscosity.n: expected a positive number or 'inf', got '" + visc + "'");
        c.visc_n = 1.0;
      }
      if (!(c.visc_n > 0.0)) r.violation("viscosity.n: must be positive");
    }

    c.source_id = r.word("source.id", "zero");
    if (c.source_id == "zero") {
    } else if (c.source_id == "eigen") {
      c.source_amplitude = r.number("source.amplitude", 1.0);
    } else if (c.source_id == "dirac") {
      c.source_mass = r.number("source.mass", 1.0);
      c.source_width = r.number("source.width", 0.1);
      c.source_tau = r.number("source.tau", 0.1);
      c.source_center_x = r.number("source.center_x", 0.5 * c.length_x);
      c.source_center_y = r.number("source.center_y", 0.5 * c.length_y);
      if (!(c.source_mass > 0.0)) r.violation("source.mass: must be positive");
      if (!(c.source_width > 0.0)) r.violation("source.width: must be positive");
      if (!(c.source_tau > 0.0)) r.violation("source.tau: must be positive");
      if (!(c.source_center_x > 0.0) || !(c.source_center_x < c.length_x))
        r.violation("source.center_x: must lie inside the domain");
      if (c.dim == 2 && (!(c.source_center_y > 0.0) || !(c.source_center_y < c.length_y)))
        r.violation("source.center_y: must lie inside the domain");
    } else if (c.source_id == "file") {
      c.source_dir = r.word("source.dir", "");
      if (c.source_dir.empty())
        r.violation("source.dir: required for source.id = file");
      else if (!std::filesystem::is_directory(c.source_dir))
        r.violation("source.dir: not a readable directory: " + c.source_dir);
    } else {
      r.violation("source.id: unknown value '" + c.source_id + "'");
    }

    c.initial_id = r.word("initial.id", "zero");
    if (c.initial_id == "zero") {
    } else if (c.initial_id == "constant") {
      c.initial_value = r.number("initial.value", 0.0);
    } else if (c.initial_id == "eigen") {
      c.initial_amplitude = r.number("initial.amplitude", 1.0);
      c.initial_offset = r.number("initial.offset", 0.0);
      c.initial_mode_x = r.integer("initial.mode_x", 1);
      c.initial_mode_y = r.integer("initial.mode_y", 1);
      if (c.initial_mode_x < 1) r.violation("initial.mode_x: must be at least 1");
      if (c.dim == 2 && c.initial_mode_y < 1) r.violation("initial.mode_y: must be at least 1");
    } else if (c.initial_id == "file") {
      c.initial_path = r.word("initial.path", "");
      if (c.initial_path.empty())
        r.violation("initial.path: required for initial.id = file");
      else if (!std::filesystem::exists(c.initial_path))
        r.violation("initial.path: file not found: " + c.initial_path);
    } else {
      r.violation("initial.id: unknown value '" + c.initial_id + "'");
    }
  }

  if (c.mode == RunMode::visc_sweep) {
    c.sweep_n = r.number_list("sweep.n_list");
    if (c.sweep_n.empty())
      r.violation("sweep.n_list: required for visc_sweep");
    else if (!detail::ascending_positive(c.sweep_n))
      r.violation("sweep.n_list: values must be positive and strictly ascending");
  }

  if (c.mode == RunMode::l1_sweep) {
    c.sweep_widths = r.number_list("sweep.widths");
    c.sweep_taus = r.number_list("sweep.taus");
    if (c.sweep_widths.empty()) r.violation("sweep.widths: required for l1_sweep");
    if (c.sweep_widths.size() != c.sweep_taus.size())
      r.violation("sweep.taus: must list one value per entry of sweep.widths");
    for (double w : c.sweep_widths)
      if (!(w > 0.0)) r.violation("sweep.widths: values must be positive");
    for (double t : c.sweep_taus)
      if (!(t > 0.0)) r.violation("sweep.taus: values must be positive");
    if (c.source_id != "dirac" && needs_problem)
      r.violation("source.id: l1_sweep studies concentrating data, needs source.id = dirac");
  }

  c.r_list = r.number_list("exponents.r_list");
  c.p_list = r.number_list("exponents.p_list");
  c.k_list = r.number_list("exponents.k_list");
  for (double rr : c.r_list)
    if (!(rr >= 1.0)) r.violation("exponents.r_list: exponents must be at least 1");
  for (double k : c.k_list)
    if (!(k > 0.0)) r.violation("exponents.k_list: truncation levels must be positive");
  if (needs_problem && c.dim == 2) {
    for (double rr : c.r_list)
      if (rr >= 2.0)
        r.warning("exponents.r_list: " + std::to_string(rr) +
                  " is above d/(d-1) threshold 2 in dimension 2; the squared-time "
                  "integrability bound does not cover it");
  }
  if (!c.p_list.empty()) {
    const int table_dim = c.dim == 2 ? 2 : 3;
    const double p_max = (table_dim + 2.0) / (table_dim + 1.0);
    for (double p : c.p_list)
      if (!(p > 1.0) || !(p < p_max))
        r.violation("exponents.p_list: " + std::to_string(p) + " outside ]1, " +
                    std::to_string(p_max) + "[ for dimension " + std::to_string(table_dim));
  }

  c.newton.tol = r.number("newton.tol", c.newton.tol);
  if (!(c.newton.tol > 0.0)) r.violation("newton.tol: must be positive");
  c.newton.max_iter = r.integer("newton.max_iter", c.newton.max_iter);
  if (c.newton.max_iter < 1) r.violation("newton.max_iter: must be at least 1");
  c.newton.damping = r.number("newton.damping", c.newton.damping);
  if (!(c.newton.damping > 0.0) || c.newton.damping > 1.0)
    r.violation("newton.damping: must lie in ]0, 1]");
  c.newton.max_backtracks = r.integer("newton.max_backtracks", c.newton.max_backtracks);
  c.newton.picard_sweeps = r.integer("newton.picard_sweeps", c.newton.picard_sweeps);
  if (c.newton.picard_sweeps < 0) r.violation("newton.picard_sweeps: must be nonnegative");
  c.newton.linear_rel_tol = r.number("newton.linear_rel_tol", c.newton.linear_rel_tol);
  if (!(c.newton.linear_rel_tol > 0.0)) r.violation("newton.linear_rel_tol: must be positive");

  if (c.mode == RunMode::trunclab) {
    c.trunclab_amplitude_exp = r.number("trunclab.amplitude_exp", 1.0);
    const std::vector<int> ladder = r.integer_list("trunclab.n_list");
    if (!ladder.empty()) c.trunclab_n = ladder;
    if (c.trunclab_n.size() < 2) r.violation("trunclab.n_list: need at least two scales");
    for (std::size_t i = 0; i < c.trunclab_n.size(); ++i) {
      if (c.trunclab_n[i] < 2) r.violation("trunclab.n_list: scales start at 2");
      if (i > 0 && c.trunclab_n[i] <= c.trunclab_n[i - 1]) {
        r.violation("trunclab.n_list: scales must be strictly ascending");
        break;
      }
    }
    c.trunclab_p = r.number("trunclab.p", 1.0);
    if (!(c.trunclab_p >= 1.0)) r.violation("trunclab.p: must be at least 1");
    c.trunclab_limit = r.number("trunclab.limit", 0.0);
    const std::vector<double> qs = r.number_list("trunclab.q_list");
    if (!qs.empty()) c.trunclab_q = qs;
    for (double q : c.trunclab_q)
      if (!(q >= 1.0) || !(q <= c.trunclab_p))
        r.violation("trunclab.q_list: need 1 <= q <= trunclab.p");
    if (c.k_list.empty()) c.k_list = {0.5, 1.0, 2.0};
  }

  r.warn_unconsumed();
  return {std::move(c), std::move(rep)};
}

inline ValidationReport validate_config(const ConfigMap& map) {
  return interpret_config(map).second;
}

inline Grid assemble_grid(const RunConfig& c) {
  if (c.dim == 1) return Grid::line(c.length_x, c.cells_x);
  return Grid::box(c.length_x, c.length_y, c.cells_x, c.cells_y);
}

inline Nonlinearity assemble_phi(const RunConfig& c) {
  if (c.phi_kind == "linear") return Nonlinearity::linear(c.phi_slope);
  if (c.phi_kind == "stefan_plateau") return Nonlinearity::stefan_plateau(c.phi_lo, c.phi_hi);
  return Nonlinearity::parse(c.phi_breakpoints, c.phi_lipschitz, c.phi_z0, c.phi_z1);
}

inline GridFunction assemble_initial(const RunConfig& c, const Grid& grid) {
  if (c.initial_id == "zero") return GridFunction(grid);
  if (c.initial_id == "constant") {
    GridFunction u0(grid);
    for (std::size_t i = 0; i < u0.size(); ++i) u0[i] = c.initial_value;
    return u0;
  }
  if (c.initial_id == "eigen") {
    GridFunction shape = grid.dim() == 1
                             ? laplacian_eigenfunction(grid, c.initial_mode_x)
                             : laplacian_eigenfunction(grid, c.initial_mode_x,
                                                       c.initial_mode_y);
    GridFunction u0(grid);
    for (std::size_t i = 0; i < u0.size(); ++i)
      u0[i] = c.initial_offset + c.initial_amplitude * shape[i];
    return u0;
  }
  return read_field_bin(c.initial_path, grid);
}

inline SourcePtr assemble_source(const RunConfig& c, const Grid& grid,
                                 const TimePartition& partition) {
  if (c.source_id == "zero") return std::make_shared<ZeroSource>(grid);
  if (c.source_id == "eigen")
    return std::make_shared<EigenSource>(grid, c.source_amplitude);
  if (c.source_id == "dirac")
    return make_dirac_source(grid, partition, {c.source_center_x, c.source_center_y},
                             c.source_width, c.source_mass, c.source_tau);
  return std::make_shared<FileSource>(c.source_dir, grid, partition.steps());
}

inline ProblemSpec assemble_problem(const RunConfig& c) {
  const Grid grid = assemble_grid(c);
  const TimePartition partition(c.horizon, c.steps);
  return ProblemSpec(grid, partition, assemble_phi(c), assemble_initial(c, grid),
                     assemble_source(c, grid, partition));
}

} // namespace stefanlab
