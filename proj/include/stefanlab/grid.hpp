// Uniform tensor grids on a box, nodal fields with zero Dirichlet extension,
// and uniform time partitions.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/errors.hpp"

namespace stefanlab {

/// Uniform grid of interior nodes on ]0,L_x[ (times ]0,L_y[ in 2D).
/// `cells(a)` counts interior nodes along axis a; boundary nodes carry the
/// implicit value 0 and are never stored. Node i along axis a sits at
/// (i+1)*spacing(a).
class Grid {
public:
  Grid(int dim, std::array<double, 2> length, std::array<int, 2> cells)
      : dim_(dim), length_(length), cells_(cells) {
    if (dim != 1 && dim != 2)
      throw ArgumentError("Grid: dim must be 1 or 2, got " + std::to_string(dim));
    for (int a = 0; a < dim; ++a) {
      if (!(length_[a] > 0.0))
        throw ArgumentError("Grid: length must be positive along axis " + std::to_string(a));
      if (cells_[a] < 2)
        throw ArgumentError("Grid: need at least 2 interior nodes along axis " + std::to_string(a));
    }
    if (dim == 1) {
      length_[1] = 0.0;
      cells_[1] = 1;
    }
  }

  /// 1D grid on ]0,length[ with `cells` interior nodes.
  static Grid line(double length, int cells) { return Grid(1, {length, 0.0}, {cells, 1}); }

  /// 2D grid on ]0,lx[ x ]0,ly[.
  static Grid box(double lx, double ly, int cx, int cy) { return Grid(2, {lx, ly}, {cx, cy}); }

  int dim() const { return dim_; }
  double length(int a) const { return length_[a]; }
  int cells(int a) const { return cells_[a]; }

  /// Mesh width along axis a. Boundary nodes are one spacing outside the
  /// first/last interior node, so spacing = length/(cells+1).
  double spacing(int a) const { return length_[a] / (cells_[a] + 1); }

  /// Volume weight of one node, spacing(0)*...*spacing(dim-1).
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing(a);
    return v;
  }

  std::size_t num_nodes() const {
    return static_cast<std::size_t>(cells_[0]) * (dim_ == 2 ? cells_[1] : 1);
  }

  /// Flat index of node (i,j); i runs fastest.
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * cells_[0] + i;
  }

  /// Coordinate of node index i along axis a.
  double coord(int i, int a) const { return (i + 1) * spacing(a); }

  bool operator==(const Grid& o) const {
    if (dim_ != o.dim_) return false;
    for (int a = 0; a < dim_; ++a)
      if (length_[a] != o.length_[a] || cells_[a] != o.cells_[a]) return false;
    return true;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  int dim_;
  std::array<double, 2> length_;
  std::array<int, 2> cells_;
};

/// Nodal field over a Grid. Zero Dirichlet values are implicit: every stencil
/// touching the boundary reads 0 there.
class GridFunction {
public:
  explicit GridFunction(Grid grid)
      : grid_(std::move(grid)), values_(grid_.num_nodes(), 0.0) {}

  GridFunction(Grid grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.num_nodes())
      throw StructuralError("GridFunction: value count " + std::to_string(values_.size()) +
                            " does not match grid with " + std::to_string(grid_.num_nodes()) +
                            " nodes");
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Throws NumericalError if any entry is NaN or infinite.
  void ensure_finite(const char* context) const {
    for (double v : values_)
      if (!std::isfinite(v))
        throw NumericalError(std::string(context) + ": non-finite field value");
  }

private:
  Grid grid_;
  std::vector<double> values_;
};

/// Uniform partition of [0, horizon] into `steps` intervals.
class TimePartition {
public:
  TimePartition(double horizon, int steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0)) throw ArgumentError("TimePartition: horizon must be positive");
    if (steps < 1) throw ArgumentError("TimePartition: need at least one step");
  }

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  double dt() const { return horizon_ / steps_; }
  /// Node t_m = m*dt, m in [0, steps].
  double time(int m) const { return horizon_ * m / steps_; }

  bool operator==(const TimePartition& o) const {
    return horizon_ == o.horizon_ && steps_ == o.steps_;
  }

private:
  double horizon_;
  int steps_;
};

/// Time-indexed family of states u_0, ..., u_M on one grid.
class Trajectory {
public:
  Trajectory(TimePartition partition, std::vector<GridFunction> states)
      : partition_(partition), states_(std::move(states)) {
    if (states_.size() != static_cast<std::size_t>(partition_.steps()) + 1)
      throw StructuralError("Trajectory: expected steps+1 states, got " +
                            std::to_string(states_.size()));
    for (const auto& s : states_)
      if (s.grid() != states_.front().grid())
        throw StructuralError("Trajectory: states live on different grids");
  }

  const TimePartition& partition() const { return partition_; }
  const Grid& grid() const { return states_.front().grid(); }
  int steps() const { return partition_.steps(); }
  const GridFunction& state(int m) const { return states_[static_cast<std::size_t>(m)]; }
  const std::vector<GridFunction>& states() const { return states_; }

private:
  TimePartition partition_;
  std::vector<GridFunction> states_;
};

} // namespace stefanlab
