// Piecewise-linear monotone nonlinearities with declared Lipschitz and
// sublinearity constants, validated at construction.
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/errors.hpp"

namespace stefanlab {

/// Monotone piecewise-linear function phi with affine extension beyond the
/// first/last breakpoint (extension slopes equal the end segment slopes).
/// Construction enforces: slopes nonnegative, phi(0) = 0, max slope equal to
/// the declared Lipschitz constant, and the sublinearity bound
/// phi(s) sign(s) >= z1 |s| - z0 everywhere.
class Nonlinearity {
public:
  Nonlinearity(std::vector<std::pair<double, double>> breakpoints, double lipschitz,
               double z0, double z1) {
    if (breakpoints.size() < 2)
      throw ArgumentError("Nonlinearity: need at least two breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (!(breakpoints[i].first < breakpoints[i + 1].first))
        throw ArgumentError("Nonlinearity: breakpoint abscissae must be strictly increasing");
    if (!(z1 > 0.0)) throw ArgumentError("Nonlinearity: z1 must be positive");
    if (z0 < 0.0) throw ArgumentError("Nonlinearity: z0 must be nonnegative");
    x_.reserve(breakpoints.size());
    y_.reserve(breakpoints.size());
    for (auto& [s, v] : breakpoints) {
      x_.push_back(s);
      y_.push_back(v);
    }
    slope_.resize(x_.size() - 1);
    double max_slope = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      slope_[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
      if (slope_[i] < -1e-12)
        throw ArgumentError("Nonlinearity: decreasing segment at breakpoint " +
                            std::to_string(i));
      slope_[i] = std::max(slope_[i], 0.0);
      max_slope = std::max(max_slope, slope_[i]);
    }
    if (std::abs(max_slope - lipschitz) > 1e-9 * std::max(1.0, lipschitz))
      throw ArgumentError("Nonlinearity: declared Lipschitz constant " +
                          std::to_string(lipschitz) + " does not match max slope " +
                          std::to_string(max_slope));
    lipschitz_ = lipschitz;
    z0_ = z0;
    z1_ = z1;

    // Pin phi(0) to exactly zero after checking the declared values hit it.
    const double at0 = eval_raw(0.0);
    if (std::abs(at0) > 1e-12 * std::max(1.0, lipschitz))
      throw ArgumentError("Nonlinearity: phi(0) = " + std::to_string(at0) +
                          ", must vanish");
    for (double& v : y_) v -= at0;

    validate_sublinearity();
  }

  /// phi(s) = slope * s.
  static Nonlinearity linear(double slope = 1.0) {
    if (!(slope > 0.0)) throw ArgumentError("Nonlinearity::linear: slope must be positive");
    return Nonlinearity({{-1.0, -slope}, {1.0, slope}}, slope, 0.0, slope);
  }

  /// Unit-slope function with a flat interval [lo, hi] and phi(0) = 0.
  static Nonlinearity stefan_plateau(double lo = 0.0, double hi = 1.0) {
    if (!(lo < hi)) throw ArgumentError("stefan_plateau: need lo < hi");
    const double p = std::clamp(0.0, lo, hi); // plateau value making phi(0) = 0
    const double z0 = std::max(hi - p, p - lo);
    return Nonlinearity(
        {{lo - 1.0, p - 1.0}, {lo, p}, {hi, p}, {hi + 1.0, p + 1.0}}, 1.0, z0, 1.0);
  }

  /// Parses "s:v, s:v, ..." breakpoint lists.
  static Nonlinearity parse(const std::string& breakpoint_text, double lipschitz,
                            double z0, double z1) {
    std::vector<std::pair<double, double>> bps;
    std::istringstream in(breakpoint_text);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ArgumentError("Nonlinearity::parse: expected s:v pair, got '" + item + "'");
      try {
        bps.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
      } catch (const std::exception&) {
        throw ArgumentError("Nonlinearity::parse: bad number in '" + item + "'");
      }
    }
    return Nonlinearity(std::move(bps), lipschitz, z0, z1);
  }

  double lipschitz() const { return lipschitz_; }
  double z0() const { return z0_; }
  double z1() const { return z1_; }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& knot_values() const { return y_; }

  double eval(double s) const { return eval_raw(s); }
  double operator()(double s) const { return eval_raw(s); }

  /// Segment slope at s; right-continuous at breakpoints, extension slopes
  /// outside the breakpoint range.
  double slope(double s) const {
    if (s < x_.front()) return slope_.front();
    if (s >= x_.back()) return slope_.back();
    std::size_t i = segment_of(s);
    return slope_[i];
  }

  /// One affine piece of phi: value y0 + slope (s - x0) for s in [x0, x1].
  struct Piece {
    double x0, x1, y0, slope;
  };

  /// Covering of [lo, hi] (lo <= hi) by affine pieces, extensions included.
  std::vector<Piece> pieces_in(double lo, double hi) const {
    if (lo > hi) throw ArgumentError("pieces_in: lo > hi");
    std::vector<Piece> out;
    double cur = lo;
    while (true) {
      double end;
      double sl;
      if (cur < x_.front()) {
        end = std::min(hi, x_.front());
        sl = slope_.front();
      } else if (cur >= x_.back()) {
        end = hi;
        sl = slope_.back();
      } else {
        const std::size_t i = segment_of(cur);
        end = std::min(hi, x_[i + 1]);
        sl = slope_[i];
      }
      out.push_back({cur, end, eval_raw(cur), sl});
      if (end >= hi) break;
      cur = end;
    }
    return out;
  }

private:
  double eval_raw(double s) const {
    if (s < x_.front()) return y_.front() + slope_.front() * (s - x_.front());
    if (s >= x_.back()) return y_.back() + slope_.back() * (s - x_.back());
    const std::size_t i = segment_of(s);
    return y_[i] + slope_[i] * (s - x_[i]);
  }

  std::size_t segment_of(double s) const {
    // Index i with x_[i] <= s < x_[i+1]; caller guarantees the range.
    const auto it = std::upper_bound(x_.begin(), x_.end(), s);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  void validate_sublinearity() const {
    // |phi| and z1 |s| - z0 are both piecewise linear, so it is enough to
    // compare them at breakpoints, at zeros of phi, at s = 0, and through
    // the extension slopes.
    if (slope_.front() < z1_ - 1e-12 || slope_.back() < z1_ - 1e-12)
      throw ArgumentError("Nonlinearity: extension slopes below z1, sublinearity fails "
                          "for large |s|");
    std::vector<double> pts = x_;
    pts.push_back(0.0);
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      if (slope_[i] > 0.0) {
        const double root = x_[i] - y_[i] / slope_[i];
        if (root > x_[i] && root < x_[i + 1]) pts.push_back(root);
      }
    }
    for (double s : pts) {
      const double tol = 1e-12 * std::max({1.0, std::abs(s), std::abs(eval_raw(s))});
      if (std::abs(eval_raw(s)) < z1_ * std::abs(s) - z0_ - tol)
        throw ArgumentError("Nonlinearity: sublinearity bound fails at s = " +
                            std::to_string(s));
    }
  }

  std::vector<double> x_, y_, slope_;
  double lipschitz_ = 0.0, z0_ = 0.0, z1_ = 0.0;
};

} // namespace stefanlab
