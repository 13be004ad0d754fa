// Truncation-convergence laboratory on ]0,1[: concrete function sequences
// with exact integral arithmetic, the tail and interpolation inequalities
// behind the strong-truncation lemma, and verdict records describing which
// convergences hold along a ladder.
//
// The centerpiece sequence is the concentrating comb v = H on the n
// intervals ]i/n, i/n + 1/n^2[, i = 0..n-1, and 0 elsewhere, with height
// H = n^a. Its mass is exactly n^(a-1): for a = 1 the combs pair against
// smooth probes like Riemann sums and tend weakly to the constant 1 while
// every truncation T_k(v) dies in L1 at the exact rate k/n; larger a makes
// the mass itself diverge. All comb integrals below are interval arithmetic,
// never grid quadrature, so no resolution artifact can pollute a verdict.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stefanlab/aux_functions.hpp"
#include "stefanlab/errors.hpp"
#include "stefanlab/grid.hpp"
#include "stefanlab/quadrature.hpp"
#include "stefanlab/rng.hpp"

namespace stefanlab {

/// Mass |w| carries on the nodes where |w| >= k, volume weighted. The tail
/// inequality bounds this by k^(1-p) ||w||_p^p for every p >= 1.
inline double tail_mass(const GridFunction& w, double k) {
  if (!(k > 0.0)) throw ArgumentError("tail_mass: k must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (std::abs(w[i]) >= k) s += std::abs(w[i]);
  return s * w.grid().cell_volume();
}

namespace detail {

// Smooth probe family used for finite weak-convergence checks:
// rho_0 = 1, rho_1 = x, rho_2 = sin(pi x).
inline constexpr int kProbeCount = 3;

inline double probe_value(int probe, double x) {
  switch (probe) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return std::sin(std::numbers::pi * x);
    default: throw ArgumentError("probe_value: unknown probe id");
  }
}

// Exact integral of a probe over [s, s+delta] inside ]0,1[.
inline double probe_interval_integral(int probe, double s, double delta) {
  switch (probe) {
    case 0: return delta;
    case 1: return delta * s + 0.5 * delta * delta;
    case 2:
      return (std::cos(std::numbers::pi * s) - std::cos(std::numbers::pi * (s + delta))) /
             std::numbers::pi;
    default: throw ArgumentError("probe_interval_integral: unknown probe id");
  }
}

// Exact integral of a probe over all of ]0,1[.
inline double probe_total_integral(int probe) {
  switch (probe) {
    case 0: return 1.0;
    case 1: return 0.5;
    case 2: return 2.0 / std::numbers::pi;
    default: throw ArgumentError("probe_total_integral: unknown probe id");
  }
}

} // namespace detail

/// Nodal sampling of one comb member together with its exact integrals.
/// The exact values come from interval formulas and are independent of the
/// grid; the field is only a visual/solver-facing rendering.
struct CombSample {
  GridFunction field;
  int n = 0;
  double amplitude_exp = 0.0;
  double height = 0.0;           // n^a
  double interval_measure = 0.0; // total support length, exactly 1/n
  double mass = 0.0;             // exactly n^(a-1)

  /// || T_k(v) ||_{L1}, exact: min(k, height) times the support measure.
  double truncated_L1(double k) const {
    if (!(k > 0.0)) throw ArgumentError("CombSample: k must be positive");
    return std::min(k, height) * interval_measure;
  }
};

/// Samples the concentrating comb with amplitude exponent a on a 1D grid
/// over ]0,1[. Every support interval must contain at least 4 interior
/// nodes, otherwise the rendering would misrepresent the comb.
inline CombSample counterexample_sequence(int n, double amplitude_exp, const Grid& grid) {
  if (n < 2) throw ArgumentError("counterexample_sequence: need n >= 2");
  if (grid.dim() != 1 || grid.length(0) != 1.0)
    throw ArgumentError("counterexample_sequence: grid must cover ]0,1[ in 1D");

  const double delta = 1.0 / (static_cast<double>(n) * n);
  const double h = grid.spacing(0);
  // Nodes strictly inside ]i/n, i/n + delta[; the worst interval decides.
  for (int i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / n;
    int count = 0;
    for (int j = static_cast<int>(std::floor(lo / h)) - 1; j < grid.cells(0); ++j) {
      if (j < 0) continue;
      const double x = grid.coord(j, 0);
      if (x >= lo + delta) break;
      if (x > lo) ++count;
    }
    if (count < 4)
      throw ResolutionError("counterexample_sequence: interval " + std::to_string(i) +
                            " of width " + std::to_string(delta) + " holds only " +
                            std::to_string(count) + " nodes; refine the grid");
  }

  const double height = std::pow(static_cast<double>(n), amplitude_exp);
  GridFunction field(grid);
  for (int j = 0; j < grid.cells(0); ++j) {
    const double x = grid.coord(j, 0);
    const double frac = x - std::floor(x * n) / n;
    if (frac > 0.0 && frac < delta) field[j] = height;
  }
  return CombSample{std::move(field), n, amplitude_exp, height, 1.0 / n, height / n};
}

/// Designated limit of a sequence family: a constant, or a nodal field for
/// grid-based families.
struct FamilyLimit {
  std::optional<double> constant;
  std::optional<GridFunction> field;

  static FamilyLimit of_constant(double c) {
    FamilyLimit l;
    l.constant = c;
    return l;
  }
  static FamilyLimit of_field(GridFunction f) {
    FamilyLimit l;
    l.field = std::move(f);
    return l;
  }
  std::string describe() const {
    if (constant) return "constant " + std::to_string(*constant);
    return "nodal field";
  }
};

/// A ladder of functions on ]0,1[ with exact integral access, measured
/// against a designated limit.
class SequenceFamily {
public:
  virtual ~SequenceFamily() = default;
  virtual std::string describe() const = 0;
  virtual int size() const = 0;
  /// Ladder parameter of member j (the n of the comb, the frequency of the
  /// oscillation); strictly increasing.
  virtual double scale(int j) const = 0;
  /// || v_j ||_p^p, exact.
  virtual double member_Lp_pow(int j, double p) const = 0;
  /// || v ||_p^p of the designated limit.
  virtual double limit_Lp_pow(const FamilyLimit& limit, double p) const = 0;
  /// || v_j - v ||_1, exact.
  virtual double diff_L1(int j, const FamilyLimit& limit) const = 0;
  /// || T_k(v_j) - T_k(v) ||_q^q, exact.
  virtual double trunc_gap_Lq_pow(int j, double k, double q,
                                  const FamilyLimit& limit) const = 0;
  /// Pairing int v_j rho against the smooth probe rho_id in {0,1,2}.
  virtual double probe_pairing(int j, int probe) const = 0;
  /// Pairing of the designated limit against the same probe.
  virtual double limit_probe_pairing(int probe, const FamilyLimit& limit) const = 0;
};

namespace detail {

inline double constant_limit(const FamilyLimit& limit, const char* family) {
  if (!limit.constant)
    throw ArgumentError(std::string(family) + ": this family needs a constant limit");
  if (*limit.constant < 0.0)
    throw ArgumentError(std::string(family) + ": limit constant must be nonnegative");
  return *limit.constant;
}

} // namespace detail

/// The concentrating comb ladder with exact interval arithmetic.
class CombFamily final : public SequenceFamily {
public:
  CombFamily(double amplitude_exp, std::vector<int> n_values)
      : a_(amplitude_exp), n_(std::move(n_values)) {
    if (n_.empty()) throw ArgumentError("CombFamily: empty ladder");
    for (std::size_t j = 0; j < n_.size(); ++j) {
      if (n_[j] < 2) throw ArgumentError("CombFamily: need n >= 2");
      if (j > 0 && n_[j] <= n_[j - 1])
        throw ArgumentError("CombFamily: ladder must be strictly increasing");
    }
  }

  std::string describe() const override {
    return "comb height n^" + std::to_string(a_);
  }
  int size() const override { return static_cast<int>(n_.size()); }
  double scale(int j) const override { return n_[at(j)]; }

  double member_Lp_pow(int j, double p) const override {
    const double n = n_[at(j)];
    return std::pow(std::pow(n, a_), p) / n; // height^p * measure
  }
  double limit_Lp_pow(const FamilyLimit& limit, double p) const override {
    return std::pow(detail::constant_limit(limit, "CombFamily"), p);
  }
  double diff_L1(int j, const FamilyLimit& limit) const override {
    const double c = detail::constant_limit(limit, "CombFamily");
    const double n = n_[at(j)];
    const double height = std::pow(n, a_);
    return std::abs(height - c) / n + c * (1.0 - 1.0 / n);
  }
  double trunc_gap_Lq_pow(int j, double k, double q,
                          const FamilyLimit& limit) const override {
    const double c = detail::constant_limit(limit, "CombFamily");
    const double n = n_[at(j)];
    const double on = std::abs(std::min(k, std::pow(n, a_)) - std::min(k, c));
    const double off = std::min(k, c);
    return std::pow(on, q) / n + std::pow(off, q) * (1.0 - 1.0 / n);
  }
  double probe_pairing(int j, int probe) const override {
    const int n = n_[at(j)];
    const double height = std::pow(static_cast<double>(n), a_);
    const double delta = 1.0 / (static_cast<double>(n) * n);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      s += detail::probe_interval_integral(probe, static_cast<double>(i) / n, delta);
    return height * s;
  }
  double limit_probe_pairing(int probe, const FamilyLimit& limit) const override {
    return detail::constant_limit(limit, "CombFamily") * detail::probe_total_integral(probe);
  }

private:
  int at(int j) const {
    if (j < 0 || j >= size()) throw ArgumentError("CombFamily: member index out of range");
    return j;
  }
  double a_;
  std::vector<int> n_;
};

/// v_j = center + amp0 j^(-decay) sin(j pi x). decay > 0 converges strongly
/// to the constant center; decay = 0 only weakly. Integer frequencies let
/// every integral reduce exactly to one positive and one negative half-arc.
class OscillationFamily final : public SequenceFamily {
public:
  OscillationFamily(double center, double amp0, double decay, std::vector<int> freqs,
                    QuadratureControl ctl = {})
      : center_(center), amp0_(amp0), decay_(decay), freqs_(std::move(freqs)), ctl_(ctl) {
    if (freqs_.empty()) throw ArgumentError("OscillationFamily: empty ladder");
    if (amp0_ < 0.0) throw ArgumentError("OscillationFamily: amplitude must be >= 0");
    if (center_ - amp0_ < 0.0)
      throw ArgumentError("OscillationFamily: center - amp0 must be >= 0, members must "
                          "stay nonnegative");
    for (std::size_t j = 0; j < freqs_.size(); ++j) {
      if (freqs_[j] < 1) throw ArgumentError("OscillationFamily: frequencies start at 1");
      if (j > 0 && freqs_[j] <= freqs_[j - 1])
        throw ArgumentError("OscillationFamily: ladder must be strictly increasing");
    }
  }

  std::string describe() const override {
    return "oscillation amp " + std::to_string(amp0_) + " j^-" + std::to_string(decay_);
  }
  int size() const override { return static_cast<int>(freqs_.size()); }
  double scale(int j) const override { return freqs_[at(j)]; }

  double member_Lp_pow(int j, double p) const override {
    const double eps = amplitude(at(j));
    return arc_average(freqs_[at(j)], [&](double s) {
      return std::pow(center_ + eps * s, p); // nonnegative by construction
    });
  }
  double limit_Lp_pow(const FamilyLimit& limit, double p) const override {
    return std::pow(detail::constant_limit(limit, "OscillationFamily"), p);
  }
  double diff_L1(int j, const FamilyLimit& limit) const override {
    const double c = detail::constant_limit(limit, "OscillationFamily");
    const double eps = amplitude(at(j));
    if (c == center_) return eps * 2.0 / std::numbers::pi; // eps int |sin|
    return arc_average(freqs_[at(j)],
                       [&](double s) { return std::abs(center_ + eps * s - c); });
  }
  double trunc_gap_Lq_pow(int j, double k, double q,
                          const FamilyLimit& limit) const override {
    const double c = detail::constant_limit(limit, "OscillationFamily");
    const double eps = amplitude(at(j));
    const double tc = std::min(k, c);
    return arc_average(freqs_[at(j)], [&](double s) {
      return std::pow(std::abs(std::min(k, center_ + eps * s) - tc), q);
    });
  }
  double probe_pairing(int j, int probe) const override {
    const int f = freqs_[at(j)];
    const double eps = amplitude(at(j));
    const double pi = std::numbers::pi;
    switch (probe) {
      case 0: return center_ + eps * (1.0 - std::cos(f * pi)) / (f * pi);
      case 1: return 0.5 * center_ - eps * std::cos(f * pi) / (f * pi);
      case 2: return center_ * 2.0 / pi + (f == 1 ? 0.5 * eps : 0.0);
      default: throw ArgumentError("OscillationFamily: unknown probe id");
    }
  }
  double limit_probe_pairing(int probe, const FamilyLimit& limit) const override {
    return detail::constant_limit(limit, "OscillationFamily") *
           detail::probe_total_integral(probe);
  }

private:
  int at(int j) const {
    if (j < 0 || j >= size())
      throw ArgumentError("OscillationFamily: member index out of range");
    return j;
  }
  double amplitude(int j) const { return amp0_ * std::pow(freqs_[j], -decay_); }

  // int_0^1 g(sin(f pi x)) dx for integer f: ceil(f/2) positive and
  // floor(f/2) negative half-arcs, each distributed like sin(pi y) on ]0,1[.
  template <class G>
  double arc_average(int f, const G& g) const {
    const double pos = adaptive_simpson(
        [&](double y) { return g(std::sin(std::numbers::pi * y)); }, 0.0, 1.0, ctl_);
    if (f % 2 == 0) {
      const double neg = adaptive_simpson(
          [&](double y) { return g(-std::sin(std::numbers::pi * y)); }, 0.0, 1.0, ctl_);
      return 0.5 * (pos + neg);
    }
    if (f == 1) return pos;
    const double neg = adaptive_simpson(
        [&](double y) { return g(-std::sin(std::numbers::pi * y)); }, 0.0, 1.0, ctl_);
    const double up = (f + 1) / 2, down = f / 2;
    return (up * pos + down * neg) / f;
  }

  double center_, amp0_, decay_;
  std::vector<int> freqs_;
  QuadratureControl ctl_;
};

/// v_j = base + amp0 j^(-decay) * seeded noise, all integrals nodal. The
/// members are honest grid functions, so "exact" here means exact for the
/// piecewise-nodal object itself.
class NoisyGridFamily final : public SequenceFamily {
public:
  NoisyGridFamily(GridFunction base, double amp0, double decay, std::vector<int> indices,
                  std::uint64_t seed)
      : base_(std::move(base)) {
    if (indices.empty()) throw ArgumentError("NoisyGridFamily: empty ladder");
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (indices[j] < 1) throw ArgumentError("NoisyGridFamily: indices start at 1");
      if (j > 0 && indices[j] <= indices[j - 1])
        throw ArgumentError("NoisyGridFamily: ladder must be strictly increasing");
    }
    if (base_.grid().dim() != 1 || base_.grid().length(0) != 1.0)
      throw ArgumentError("NoisyGridFamily: base must live on a 1D grid over ]0,1[");
    for (int idx : indices) {
      scales_.push_back(idx);
      auto gen = seeded_stream(seed, "noisy_member_" + std::to_string(idx));
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      GridFunction m = base_;
      const double eps = amp0 * std::pow(static_cast<double>(idx), -decay);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += eps * unif(gen);
      members_.push_back(std::move(m));
    }
  }

  std::string describe() const override { return "base plus decaying nodal noise"; }
  int size() const override { return static_cast<int>(members_.size()); }
  double scale(int j) const override { return scales_[at(j)]; }

  double member_Lp_pow(int j, double p) const override {
    return lp_pow(members_[at(j)], p);
  }
  double limit_Lp_pow(const FamilyLimit& limit, double p) const override {
    return lp_pow(limit_field(limit), p);
  }
  double diff_L1(int j, const FamilyLimit& limit) const override {
    const GridFunction v = limit_field(limit);
    const GridFunction& m = members_[at(j)];
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += std::abs(m[i] - v[i]);
    return s * m.grid().cell_volume();
  }
  double trunc_gap_Lq_pow(int j, double k, double q,
                          const FamilyLimit& limit) const override {
    const GridFunction v = limit_field(limit);
    const GridFunction& m = members_[at(j)];
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      s += std::pow(std::abs(truncate(k, m[i]) - truncate(k, v[i])), q);
    return s * m.grid().cell_volume();
  }
  double probe_pairing(int j, int probe) const override {
    return nodal_pairing(members_[at(j)], probe);
  }
  double limit_probe_pairing(int probe, const FamilyLimit& limit) const override {
    return nodal_pairing(limit_field(limit), probe);
  }

private:
  int at(int j) const {
    if (j < 0 || j >= size())
      throw ArgumentError("NoisyGridFamily: member index out of range");
    return j;
  }
  // Constant limits broadcast onto the base grid; field limits must match it.
  GridFunction limit_field(const FamilyLimit& limit) const {
    if (limit.constant) {
      GridFunction c(base_.grid());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = *limit.constant;
      return c;
    }
    if (!limit.field)
      throw ArgumentError("NoisyGridFamily: limit holds neither constant nor field");
    if (limit.field->grid() != base_.grid())
      throw StructuralError("NoisyGridFamily: limit grid mismatch");
    return *limit.field;
  }
  static double lp_pow(const GridFunction& g, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(std::abs(g[i]), p);
    return s * g.grid().cell_volume();
  }
  static double nodal_pairing(const GridFunction& g, int probe) {
    double s = 0.0;
    for (int i = 0; i < g.grid().cells(0); ++i)
      s += g[i] * detail::probe_value(probe, g.grid().coord(i, 0));
    return s * g.grid().cell_volume();
  }

  GridFunction base_;
  std::vector<GridFunction> members_;
  std::vector<double> scales_;
};

/// Three-way trend of a nonnegative ladder: compares the last rung against
/// the first; ladders already at zero count as vanished.
inline std::string classify_trend(const std::vector<double>& values) {
  if (values.size() < 2) throw ArgumentError("classify_trend: need at least two rungs");
  const double first = values.front(), last = values.back();
  if (first < 1e-14 && last < 1e-14) return "vanishing";
  if (last <= 0.25 * first) return "vanishing";
  if (last >= 4.0 * first) return "growing";
  return "flat";
}

struct ChainEntry {
  double scale = 0.0;
  double k = 0.0;
  double lhs = 0.0; // || v_j - v ||_1
  double rhs = 0.0; // truncation gap + tail bound
  bool ok = false;
};

struct GapTrend {
  double k = 0.0;
  double q = 0.0;
  std::vector<double> gaps; // || T_k v_j - T_k v ||_q along the ladder
  std::string trend;
  bool interpolation_ok = true; // gap_q <= gap_1^(1-eta) gap_p^eta throughout
};

struct TruncationLemmaVerdict {
  std::string family;
  std::string limit;
  double p = 0.0;
  double uniform_Lp_bound = 0.0;
  std::vector<ChainEntry> chain;
  std::vector<GapTrend> gap_trends;
  std::vector<double> member_L1_gaps; // || v_j - v ||_1 along the ladder
  std::string family_L1_trend;
  bool chain_holds = false;
  bool truncations_converge = false;
  bool interpolation_holds = false;
};

/// Evaluates the strong-truncation lemma machinery on one family:
///   || v_j - v ||_1 <= || T_k v_j - T_k v ||_1 + k^(1-p)(||v_j||_p^p + ||v||_p^p)
/// for every rung and level, the L^q interpolation of the truncation gaps
/// between L^1 and L^p, and the convergence trends. The family must stay
/// uniformly bounded in L^p along the ladder; p = 1 is admitted to exhibit
/// why the lemma needs p > 1, the tail term then has no smallness in k.
inline TruncationLemmaVerdict check_strong_truncation_lemma(
    const SequenceFamily& family, const FamilyLimit& v_limit, double p,
    const std::vector<double>& k_list, const std::vector<double>& q_list) {
  if (!(p >= 1.0)) throw ArgumentError("check_strong_truncation_lemma: need p >= 1");
  if (k_list.empty() || q_list.empty())
    throw ArgumentError("check_strong_truncation_lemma: empty level list");
  for (double k : k_list)
    if (!(k > 0.0)) throw ArgumentError("check_strong_truncation_lemma: k must be > 0");
  for (double q : q_list)
    if (!(q >= 1.0) || !(q <= p))
      throw ArgumentError("check_strong_truncation_lemma: need 1 <= q <= p");

  const int count = family.size();
  if (count < 2)
    throw ArgumentError("check_strong_truncation_lemma: need at least two rungs");

  TruncationLemmaVerdict verdict;
  verdict.family = family.describe();
  verdict.limit = v_limit.describe();
  verdict.p = p;

  // Uniform L^p boundedness along the ladder; a monotone blow-up past a
  // factor 4 is rejected as violating the lemma's hypothesis.
  std::vector<double> lp_norms;
  for (int j = 0; j < count; ++j)
    lp_norms.push_back(std::pow(family.member_Lp_pow(j, p), 1.0 / p));
  for (double v : lp_norms) verdict.uniform_Lp_bound = std::max(verdict.uniform_Lp_bound, v);
  bool monotone_growth = true;
  for (int j = 0; j + 1 < count; ++j)
    if (lp_norms[j + 1] < lp_norms[j]) monotone_growth = false;
  if (monotone_growth && lp_norms.back() > 4.0 * lp_norms.front())
    throw ArgumentError("check_strong_truncation_lemma: family is not uniformly "
                        "L^p bounded along the ladder (norm grew from " +
                        std::to_string(lp_norms.front()) + " to " +
                        std::to_string(lp_norms.back()) + ")");

  const double limit_lp_pow = family.limit_Lp_pow(v_limit, p);
  verdict.chain_holds = true;
  for (int j = 0; j < count; ++j)
    verdict.member_L1_gaps.push_back(family.diff_L1(j, v_limit));
  verdict.family_L1_trend = classify_trend(verdict.member_L1_gaps);

  for (double k : k_list)
    for (int j = 0; j < count; ++j) {
      ChainEntry e;
      e.scale = family.scale(j);
      e.k = k;
      e.lhs = verdict.member_L1_gaps[j];
      e.rhs = family.trunc_gap_Lq_pow(j, k, 1.0, v_limit) +
              std::pow(k, 1.0 - p) * (family.member_Lp_pow(j, p) + limit_lp_pow);
      e.ok = e.lhs <= e.rhs * (1.0 + 1e-12) + 1e-12;
      if (!e.ok) verdict.chain_holds = false;
      verdict.chain.push_back(e);
    }

  verdict.truncations_converge = true;
  verdict.interpolation_holds = true;
  for (double k : k_list)
    for (double q : q_list) {
      GapTrend trend;
      trend.k = k;
      trend.q = q;
      for (int j = 0; j < count; ++j) {
        const double gap_q = std::pow(family.trunc_gap_Lq_pow(j, k, q, v_limit), 1.0 / q);
        trend.gaps.push_back(gap_q);
        if (p > 1.0 && q > 1.0) {
          const double eta = (1.0 - 1.0 / q) / (1.0 - 1.0 / p);
          const double gap_1 = family.trunc_gap_Lq_pow(j, k, 1.0, v_limit);
          const double gap_p = std::pow(family.trunc_gap_Lq_pow(j, k, p, v_limit), 1.0 / p);
          const double bound = std::pow(gap_1, 1.0 - eta) * std::pow(gap_p, eta);
          if (gap_q > bound * (1.0 + 1e-9) + 1e-14) trend.interpolation_ok = false;
        }
      }
      trend.trend = classify_trend(trend.gaps);
      if (trend.trend != "vanishing") verdict.truncations_converge = false;
      if (!trend.interpolation_ok) verdict.interpolation_holds = false;
      verdict.gap_trends.push_back(trend);
    }
  return verdict;
}

/// The weak-convergence mechanism at desk scale: probe pairings drifting to
/// the limit's pairings while the truncation mass dies.
struct WeakLimitReport {
  std::vector<double> scales;
  std::vector<std::array<double, 3>> pairing_gaps; // per rung, per probe
  std::vector<double> trunc_L1;                    // || T_k(v_j) - T_k(v) ||_1
  double k = 0.0;
  std::string weak_pairing_trend; // trend of the worst probe gap
  std::string l1_trunc_trend;
};

inline WeakLimitReport weak_limit_report(const SequenceFamily& family,
                                         const FamilyLimit& v_limit, double k) {
  if (!(k > 0.0)) throw ArgumentError("weak_limit_report: k must be positive");
  if (family.size() < 2) throw ArgumentError("weak_limit_report: need at least two rungs");
  WeakLimitReport rep;
  rep.k = k;
  std::vector<double> worst;
  for (int j = 0; j < family.size(); ++j) {
    rep.scales.push_back(family.scale(j));
    std::array<double, 3> gaps{};
    double w = 0.0;
    for (int probe = 0; probe < detail::kProbeCount; ++probe) {
      gaps[probe] = std::abs(family.probe_pairing(j, probe) -
                             family.limit_probe_pairing(probe, v_limit));
      w = std::max(w, gaps[probe]);
    }
    rep.pairing_gaps.push_back(gaps);
    worst.push_back(w);
    rep.trunc_L1.push_back(family.trunc_gap_Lq_pow(j, k, 1.0, FamilyLimit::of_constant(0.0)));
  }
  const std::string raw = classify_trend(worst);
  rep.weak_pairing_trend = raw == "vanishing" ? "converging"
                         : raw == "growing"   ? "diverging"
                                              : raw;
  rep.l1_trunc_trend = classify_trend(rep.trunc_L1);
  return rep;
}

} // namespace stefanlab
