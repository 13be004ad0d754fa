// Time-indexed source providers for the implicit stepper.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/grid.hpp"
#include "stefanlab/manufactured.hpp"
#include "stefanlab/operators.hpp"

namespace stefanlab {

/// Supplies the field f_m entering step m, m in [1, steps]. Smooth analytic
/// sources sample f(., t_m); concentrated-in-time sources average over the
/// step interval so no injected mass can fall between time nodes.
class SourceProvider {
public:
  virtual ~SourceProvider() = default;
  virtual GridFunction field(int m) const = 0;
  virtual std::string describe() const = 0;
};

using SourcePtr = std::shared_ptr<const SourceProvider>;

class ZeroSource final : public SourceProvider {
public:
  explicit ZeroSource(Grid grid) : grid_(std::move(grid)) {}
  GridFunction field(int) const override { return GridFunction(grid_); }
  std::string describe() const override { return "zero"; }

private:
  Grid grid_;
};

/// Constant-in-time multiple of the first Laplacian eigenfunction.
class EigenSource final : public SourceProvider {
public:
  EigenSource(Grid grid, double amplitude)
      : shape_(laplacian_eigenfunction(grid, 1, 1)), amplitude_(amplitude) {}
  GridFunction field(int) const override {
    GridFunction f = shape_;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= amplitude_;
    return f;
  }
  std::string describe() const override {
    return "eigen amplitude " + std::to_string(amplitude_);
  }

private:
  GridFunction shape_;
  double amplitude_;
};

/// Samples a callable f(x, y, t) at the step's end time t_m.
class CallableSource final : public SourceProvider {
public:
  CallableSource(Grid grid, TimePartition partition,
                 std::function<double(double, double, double)> fn, std::string label)
      : grid_(std::move(grid)), partition_(partition), fn_(std::move(fn)),
        label_(std::move(label)) {}
  GridFunction field(int m) const override {
    const double t = partition_.time(m);
    GridFunction f(grid_);
    if (grid_.dim() == 1) {
      for (int i = 0; i < grid_.cells(0); ++i) f[i] = fn_(grid_.coord(i, 0), 0.0, t);
    } else {
      for (int j = 0; j < grid_.cells(1); ++j)
        for (int i = 0; i < grid_.cells(0); ++i)
          f[grid_.index(i, j)] = fn_(grid_.coord(i, 0), grid_.coord(j, 1), t);
    }
    f.ensure_finite("CallableSource");
    return f;
  }
  std::string describe() const override { return label_; }

private:
  Grid grid_;
  TimePartition partition_;
  std::function<double(double, double, double)> fn_;
  std::string label_;
};

/// Precomputed fields from the manufactured-source generator.
class ManufacturedFieldSource final : public SourceProvider {
public:
  ManufacturedFieldSource(std::string name, std::vector<GridFunction> fields)
      : name_(std::move(name)), fields_(std::move(fields)) {}
  GridFunction field(int m) const override {
    if (m < 1 || m > static_cast<int>(fields_.size()))
      throw StructuralError("ManufacturedFieldSource: step index out of range");
    return fields_[static_cast<std::size_t>(m) - 1];
  }
  std::string describe() const override { return "manufactured " + name_; }

private:
  std::string name_;
  std::vector<GridFunction> fields_;
};

/// Approximation of a point mass released near t = 0: a spatial Gaussian of
/// width `width`, renormalized on the grid so the injected space integral is
/// exactly `mass`, times a box profile on [0, tau] averaged over each step.
class DiracApproxSource final : public SourceProvider {
public:
  DiracApproxSource(Grid grid, TimePartition partition, std::array<double, 2> center,
                    double width, double mass, double tau)
      : grid_(std::move(grid)), partition_(partition), shape_(grid_), tau_(tau),
        mass_(mass), width_(width), center_(center) {
    if (!(width > 0.0)) throw ArgumentError("DiracApproxSource: width must be positive");
    if (!(tau > 0.0)) throw ArgumentError("DiracApproxSource: tau must be positive");
    double total = 0.0;
    if (grid_.dim() == 1) {
      for (int i = 0; i < grid_.cells(0); ++i) {
        const double dx = grid_.coord(i, 0) - center[0];
        shape_[i] = std::exp(-0.5 * dx * dx / (width * width));
        total += shape_[i];
      }
    } else {
      for (int j = 0; j < grid_.cells(1); ++j)
        for (int i = 0; i < grid_.cells(0); ++i) {
          const double dx = grid_.coord(i, 0) - center[0];
          const double dy = grid_.coord(j, 1) - center[1];
          shape_[grid_.index(i, j)] =
              std::exp(-0.5 * (dx * dx + dy * dy) / (width * width));
          total += shape_[grid_.index(i, j)];
        }
    }
    total *= grid_.cell_volume();
    if (!(total > 0.0))
      throw ResolutionError("DiracApproxSource: Gaussian mass vanishes on this grid");
    for (std::size_t i = 0; i < shape_.size(); ++i) shape_[i] *= mass / total;
  }

  GridFunction field(int m) const override {
    const double dt = partition_.dt();
    const double t0 = partition_.time(m - 1), t1 = partition_.time(m);
    const double overlap = std::max(0.0, std::min(t1, tau_) - std::min(t0, tau_));
    const double factor = overlap / (dt * tau_);
    GridFunction f = shape_;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= factor;
    return f;
  }

  std::string describe() const override {
    return "dirac_approx width " + std::to_string(width_) + " tau " + std::to_string(tau_) +
           " mass " + std::to_string(mass_);
  }

private:
  Grid grid_;
  TimePartition partition_;
  GridFunction shape_;
  double tau_, mass_, width_;
  std::array<double, 2> center_;
};

inline SourcePtr make_zero_source(const Grid& grid) {
  return std::make_shared<ZeroSource>(grid);
}

inline SourcePtr make_eigen_source(const Grid& grid, double amplitude = 1.0) {
  return std::make_shared<EigenSource>(grid, amplitude);
}

inline SourcePtr make_manufactured_source_provider(const ManufacturedSolution& ms,
                                                   const Nonlinearity& nl, double inv_n,
                                                   const Grid& grid,
                                                   const TimePartition& partition,
                                                   std::vector<std::string>* warnings = nullptr) {
  ManufacturedSource src = manufactured_source(ms, nl, inv_n, grid, partition);
  if (warnings)
    warnings->insert(warnings->end(), src.warnings.begin(), src.warnings.end());
  return std::make_shared<ManufacturedFieldSource>(ms.name, std::move(src.fields));
}

inline SourcePtr make_dirac_source(const Grid& grid, const TimePartition& partition,
                                   std::array<double, 2> center, double width, double mass,
                                   double tau) {
  return std::make_shared<DiracApproxSource>(grid, partition, center, width, mass, tau);
}

} // namespace stefanlab
