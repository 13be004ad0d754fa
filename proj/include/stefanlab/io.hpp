// Field and trajectory persistence. Two formats cover everything: a binary
// field file (8-byte little-endian count, then count little-endian float64
// values) for exact round trips, and an "index,value" CSV for eyeballing.
// Trajectories are one binary file per state; a FileSource feeds the solver
// from per-step binary fields named f_000001.bin, f_000002.bin, ...
#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/errors.hpp"
#include "stefanlab/grid.hpp"
#include "stefanlab/solver.hpp"
#include "stefanlab/sources.hpp"

namespace stefanlab {

namespace detail {

inline void put_le64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

inline std::uint64_t get_le64(std::istream& in) {
  char buf[8];
  in.read(buf, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

inline void put_f64(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_le64(out, bits);
}

inline double get_f64(std::istream& in) {
  const std::uint64_t bits = get_le64(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

// Shortest representation that parses back to the same double; keeps CSV
// and JSON artifacts byte-deterministic.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char cand[32];
      std::snprintf(cand, sizeof cand, "%.*g", prec, v);
      std::sscanf(cand, "%lf", &back);
      if (back == v) return cand;
    }
  }
  return buf;
}

inline std::string step_tag(int m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", m);
  return buf;
}

} // namespace detail

inline void write_field_bin(const std::filesystem::path& path, const GridFunction& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_field_bin: cannot open " + path.string());
  detail::put_le64(out, g.size());
  for (std::size_t i = 0; i < g.size(); ++i) detail::put_f64(out, g[i]);
  if (!out) throw IoError("write_field_bin: write failed on " + path.string());
}

inline std::vector<double> read_values_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_values_bin: cannot open " + path.string());
  const std::uint64_t count = detail::get_le64(in);
  if (!in) throw IoError("read_values_bin: truncated header in " + path.string());
  if (count > (1ull << 32))
    throw IoError("read_values_bin: implausible count in " + path.string());
  std::vector<double> values(count);
  for (auto& v : values) v = detail::get_f64(in);
  if (!in) throw IoError("read_values_bin: truncated payload in " + path.string());
  return values;
}

inline GridFunction read_field_bin(const std::filesystem::path& path, const Grid& grid) {
  std::vector<double> values = read_values_bin(path);
  if (values.size() != static_cast<std::size_t>(grid.num_nodes()))
    throw IoError("read_field_bin: " + path.string() + " holds " +
                  std::to_string(values.size()) + " values, grid has " +
                  std::to_string(grid.num_nodes()) + " nodes");
  return GridFunction(grid, std::move(values));
}

inline void write_field_csv(const std::filesystem::path& path, const GridFunction& g) {
  std::ofstream out(path);
  if (!out) throw IoError("write_field_csv: cannot open " + path.string());
  out << "index,value\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out << i << ',' << detail::format_double(g[i]) << '\n';
  if (!out) throw IoError("write_field_csv: write failed on " + path.string());
}

/// Writes states m = 0..M as <stem>_m000000.bin etc.; returns the file names.
inline std::vector<std::string> write_trajectory(const std::filesystem::path& dir,
                                                 const Trajectory& traj,
                                                 const std::string& stem) {
  std::vector<std::string> names;
  for (int m = 0; m <= traj.steps(); ++m) {
    std::string name = stem + "_m" + detail::step_tag(m) + ".bin";
    write_field_bin(dir / name, traj.state(m));
    names.push_back(std::move(name));
  }
  return names;
}

inline Trajectory read_trajectory(const std::filesystem::path& dir, const std::string& stem,
                                  const Grid& grid, const TimePartition& partition) {
  std::vector<GridFunction> states;
  states.reserve(partition.steps() + 1);
  for (int m = 0; m <= partition.steps(); ++m)
    states.push_back(
        read_field_bin(dir / (stem + "_m" + detail::step_tag(m) + ".bin"), grid));
  return Trajectory(partition, std::move(states));
}

/// Source term read from per-step binary fields f_000001.bin .. f_<M>.bin in
/// one directory. Loads eagerly so malformed inputs fail before the solve.
class FileSource final : public SourceProvider {
public:
  FileSource(const std::filesystem::path& dir, const Grid& grid, int steps)
      : dir_(dir.string()) {
    if (steps < 1) throw ArgumentError("FileSource: need at least one step");
    fields_.reserve(steps);
    for (int m = 1; m <= steps; ++m)
      fields_.push_back(read_field_bin(dir / ("f_" + detail::step_tag(m) + ".bin"), grid));
  }
  GridFunction field(int m) const override {
    if (m < 1 || m > static_cast<int>(fields_.size()))
      throw ArgumentError("FileSource: step " + std::to_string(m) + " out of range");
    return fields_[static_cast<std::size_t>(m) - 1];
  }
  std::string describe() const override { return "file fields from " + dir_; }

private:
  std::string dir_;
  std::vector<GridFunction> fields_;
};

} // namespace stefanlab
