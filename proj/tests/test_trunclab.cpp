// Truncation laboratory: comb and oscillation ladders with exact integral
// oracles recomputed here by hand or by midpoint Riemann sums, the tail and
// interpolation inequalities as properties, and the verdict records on
// families whose convergence behavior is known in closed form.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "stefanlab/rng.hpp"
#include "stefanlab/trunclab.hpp"

using namespace stefanlab;

namespace {

double probe_at(int probe, double x) {
  if (probe == 0) return 1.0;
  if (probe == 1) return x;
  return std::sin(std::numbers::pi * x);
}

// Midpoint Riemann recomputation of the comb pairing, independent of the
// interval primitives inside the family. Probes 0 and 1 are affine, so the
// midpoint rule is exact for them; probe 2 contributes the only error,
// bounded by pi^2/24 * mass * n^-4.
double midpoint_comb_pairing(int n, double a, int probe) {
  const double height = std::pow(static_cast<double>(n), a);
  const double delta = 1.0 / (static_cast<double>(n) * n);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    s += delta * probe_at(probe, static_cast<double>(i) / n + 0.5 * delta);
  return height * s;
}

} // namespace

TEST_CASE("comb members carry the advertised exact integrals", "[trunclab]") {
  Grid g = Grid::line(1.0, 4095);

  SECTION("unit amplitude exponent keeps mass one at every scale") {
    for (int n : {2, 5, 10, 25}) {
      CombSample s = counterexample_sequence(n, 1.0, g);
      REQUIRE(s.mass == 1.0);
      REQUIRE(s.height == static_cast<double>(n));
      REQUIRE(s.interval_measure == 1.0 / n);
    }
  }

  SECTION("cubic amplitude exponent blows the mass up as n squared") {
    for (int n : {2, 5, 10}) {
      CombSample s = counterexample_sequence(n, 3.0, g);
      REQUIRE_THAT(s.mass, Catch::Matchers::WithinRel(std::pow(n, 2.0), 1e-14));
    }
  }

  SECTION("truncations die at the exact rate k over n") {
    for (int n : {5, 10, 25})
      for (double k : {0.5, 1.0, 2.0, 4.0}) {
        CombSample s = counterexample_sequence(n, 1.0, g);
        if (s.height > k)
          REQUIRE_THAT(s.truncated_L1(k), Catch::Matchers::WithinAbs(k / n, 1e-14));
        else
          REQUIRE_THAT(s.truncated_L1(k), Catch::Matchers::WithinAbs(s.mass, 1e-14));
      }
    REQUIRE_THROWS_AS(counterexample_sequence(5, 1.0, g).truncated_L1(0.0), ArgumentError);
  }

  SECTION("the nodal rendering approximates the interval integrals") {
    CombSample s = counterexample_sequence(4, 1.0, Grid::line(1.0, 255));
    double nodal_mass = 0.0;
    for (std::size_t i = 0; i < s.field.size(); ++i) nodal_mass += s.field[i];
    nodal_mass *= s.field.grid().cell_volume();
    // Interval/grid misalignment loses at most two node weights per tooth.
    REQUIRE(std::abs(nodal_mass - s.mass) <= 0.3 * s.mass);
    REQUIRE(std::abs(tail_mass(s.field, 3.0) - s.mass) <= 0.3 * s.mass);
  }

  SECTION("under-resolved grids are rejected, not silently sampled") {
    REQUIRE_THROWS_AS(counterexample_sequence(4, 1.0, Grid::line(1.0, 31)),
                      ResolutionError);
    REQUIRE_NOTHROW(counterexample_sequence(4, 1.0, Grid::line(1.0, 255)));
    REQUIRE_THROWS_AS(counterexample_sequence(1, 1.0, g), ArgumentError);
    REQUIRE_THROWS_AS(counterexample_sequence(4, 1.0, Grid::line(2.0, 4095)),
                      ArgumentError);
    REQUIRE_THROWS_AS(counterexample_sequence(4, 1.0, Grid::box(1.0, 1.0, 63, 63)),
                      ArgumentError);
  }
}

TEST_CASE("comb pairings match a Riemann recomputation and drift to the "
          "smooth limit",
          "[trunclab]") {
  CombFamily fam(1.0, {10, 100, 1000});
  const double limits[3] = {1.0, 0.5, 2.0 / std::numbers::pi};

  for (int j = 0; j < fam.size(); ++j)
    for (int probe = 0; probe < 3; ++probe) {
      const int n = static_cast<int>(fam.scale(j));
      const double exact = fam.probe_pairing(j, probe);
      REQUIRE_THAT(exact,
                   Catch::Matchers::WithinAbs(midpoint_comb_pairing(n, 1.0, probe), 1e-3));
      if (n == 1000)
        REQUIRE(std::abs(exact - limits[probe]) <= 0.1 * std::abs(limits[probe]));
    }

  // The cubic comb pairs like n^2 against the constant probe.
  CombFamily cubic(3.0, {10, 100});
  REQUIRE_THAT(cubic.probe_pairing(0, 0), Catch::Matchers::WithinRel(100.0, 1e-12));
  REQUIRE_THAT(cubic.probe_pairing(1, 0), Catch::Matchers::WithinRel(10000.0, 1e-12));
  REQUIRE_THAT(cubic.probe_pairing(0, 0),
               Catch::Matchers::WithinAbs(midpoint_comb_pairing(10, 3.0, 0), 1e-3 * 100.0));

  SECTION("ladder validation") {
    REQUIRE_THROWS_AS(CombFamily(1.0, {}), ArgumentError);
    REQUIRE_THROWS_AS(CombFamily(1.0, {10, 10}), ArgumentError);
    REQUIRE_THROWS_AS(CombFamily(1.0, {1, 10}), ArgumentError);
    REQUIRE_THROWS_AS(fam.probe_pairing(3, 0), ArgumentError);
    REQUIRE_THROWS_AS(fam.diff_L1(0, FamilyLimit::of_constant(-1.0)), ArgumentError);
  }
}

TEST_CASE("the tail of any field is controlled by its p-th moment", "[trunclab]") {
  Grid g = Grid::line(1.0, 300);
  auto gen = seeded_stream(0x7a11, "tail_property");
  std::uniform_real_distribution<double> unif(-6.0, 6.0);

  for (int rep = 0; rep < 20; ++rep) {
    GridFunction w(g);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = unif(gen);
    for (double p : {1.5, 2.0, 3.0})
      for (double k : {0.5, 1.0, 2.0, 5.0}) {
        double pmom = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) pmom += std::pow(std::abs(w[i]), p);
        pmom *= g.cell_volume();
        REQUIRE(tail_mass(w, k) <= std::pow(k, 1.0 - p) * pmom * (1.0 + 1e-12));
      }
  }
  REQUIRE_THROWS_AS(tail_mass(GridFunction(g), -1.0), ArgumentError);
}

TEST_CASE("a constant ladder registers as already converged", "[trunclab]") {
  OscillationFamily fam(2.0, 0.0, 1.0, {1, 2, 4});
  FamilyLimit lim = FamilyLimit::of_constant(2.0);

  auto verdict = check_strong_truncation_lemma(fam, lim, 2.0, {1.0, 3.0}, {1.0, 2.0});
  REQUIRE(verdict.chain_holds);
  REQUIRE(verdict.truncations_converge);
  REQUIRE(verdict.interpolation_holds);
  REQUIRE(verdict.family_L1_trend == "vanishing");
  for (double gap : verdict.member_L1_gaps) REQUIRE(gap == 0.0);
  for (const auto& t : verdict.gap_trends)
    for (double gapv : t.gaps) REQUIRE(std::abs(gapv) < 1e-13);
  REQUIRE_THAT(verdict.uniform_Lp_bound, Catch::Matchers::WithinRel(2.0, 1e-9));

  WeakLimitReport rep = weak_limit_report(fam, lim, 1.0);
  REQUIRE(rep.weak_pairing_trend == "converging");
}

TEST_CASE("decaying oscillations converge strongly and pass every check",
          "[trunclab]") {
  OscillationFamily fam(1.0, 0.5, 1.0, {1, 2, 4, 8});
  FamilyLimit lim = FamilyLimit::of_constant(1.0);

  SECTION("closed-form member integrals agree with direct quadrature") {
    // || v_1 - 1 ||_1 = eps * int |sin| = 2 eps / pi at eps = 1/2.
    REQUIRE_THAT(fam.diff_L1(0, lim),
                 Catch::Matchers::WithinAbs(1.0 / std::numbers::pi, 1e-9));
    // || v_2 ||_2^2 = 1 + eps^2 / 2 at eps = 1/4.
    REQUIRE_THAT(fam.member_Lp_pow(1, 2.0),
                 Catch::Matchers::WithinAbs(1.0 + 0.25 * 0.25 / 2.0, 1e-9));
    // Pairing against sin(pi x) picks up eps/2 only at frequency one.
    REQUIRE_THAT(fam.probe_pairing(0, 2),
                 Catch::Matchers::WithinAbs(2.0 / std::numbers::pi + 0.25, 1e-12));
    REQUIRE_THAT(fam.probe_pairing(2, 2),
                 Catch::Matchers::WithinAbs(2.0 / std::numbers::pi, 1e-12));
  }

  SECTION("the lemma verdict is fully positive") {
    auto verdict =
        check_strong_truncation_lemma(fam, lim, 2.0, {0.5, 1.25}, {1.0, 1.5, 2.0});
    REQUIRE(verdict.chain_holds);
    REQUIRE(verdict.truncations_converge);
    REQUIRE(verdict.interpolation_holds);
    REQUIRE(verdict.family_L1_trend == "vanishing");
    for (const auto& e : verdict.chain) REQUIRE(e.ok);
  }

  SECTION("construction guards") {
    REQUIRE_THROWS_AS(OscillationFamily(1.0, 1.5, 1.0, {1, 2}), ArgumentError);
    REQUIRE_THROWS_AS(OscillationFamily(1.0, 0.5, 1.0, {2, 2}), ArgumentError);
    REQUIRE_THROWS_AS(OscillationFamily(1.0, 0.5, 1.0, {0, 2}), ArgumentError);
    REQUIRE_THROWS_AS(OscillationFamily(1.0, -0.1, 1.0, {1, 2}), ArgumentError);
  }
}

TEST_CASE("persistent oscillations converge weakly but not strongly", "[trunclab]") {
  OscillationFamily fam(1.0, 0.5, 0.0, {1, 2, 4, 8, 16});
  FamilyLimit lim = FamilyLimit::of_constant(1.0);

  auto verdict = check_strong_truncation_lemma(fam, lim, 2.0, {1.25}, {1.0, 2.0});
  REQUIRE(verdict.chain_holds);
  REQUIRE_FALSE(verdict.truncations_converge);
  REQUIRE(verdict.interpolation_holds);
  REQUIRE(verdict.family_L1_trend == "flat");
  // The L1 distance to the weak limit never moves: eps * 2 / pi at every rung.
  for (double gap : verdict.member_L1_gaps)
    REQUIRE_THAT(gap, Catch::Matchers::WithinAbs(1.0 / std::numbers::pi, 1e-9));

  WeakLimitReport rep = weak_limit_report(fam, lim, 1.25);
  REQUIRE(rep.weak_pairing_trend == "converging");
  REQUIRE(rep.l1_trunc_trend == "flat");
}

TEST_CASE("nodal noise ladders satisfy the chain inequality with slack",
          "[trunclab]") {
  Grid g = Grid::line(1.0, 200);
  GridFunction base(g);
  for (int i = 0; i < g.cells(0); ++i)
    base[i] = 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * g.coord(i, 0));
  NoisyGridFamily fam(base, 0.4, 0.8, {1, 2, 4, 8}, 0xfeed);
  FamilyLimit lim = FamilyLimit::of_field(base);

  auto verdict = check_strong_truncation_lemma(fam, lim, 2.0, {0.75, 1.5}, {1.0, 2.0});
  REQUIRE(verdict.chain_holds);
  REQUIRE(verdict.truncations_converge);
  REQUIRE(verdict.interpolation_holds);
  REQUIRE(verdict.family_L1_trend == "vanishing");
  // Noise amplitudes scale like j^-0.8, so the L1 gaps must roughly track
  // 8^-0.8 ~ 0.19 across the ladder.
  REQUIRE(verdict.member_L1_gaps.back() <=
          0.35 * verdict.member_L1_gaps.front());

  SECTION("limit plumbing") {
    REQUIRE_THROWS_AS(
        check_strong_truncation_lemma(fam, FamilyLimit::of_field(GridFunction(Grid::line(1.0, 64))),
                                      2.0, {1.0}, {1.0}),
        StructuralError);
    FamilyLimit empty;
    REQUIRE_THROWS_AS(fam.diff_L1(0, empty), ArgumentError);
    REQUIRE_THROWS_AS(NoisyGridFamily(GridFunction(Grid::box(1.0, 1.0, 8, 8)), 0.1, 1.0,
                                      {1, 2}, 1),
                      ArgumentError);
  }
}

TEST_CASE("the comb defeats the truncation route to strong convergence",
          "[trunclab]") {
  CombFamily fam(1.0, {10, 100, 1000});
  FamilyLimit one = FamilyLimit::of_constant(1.0);

  SECTION("at p = 1 the chain holds but carries no smallness") {
    auto verdict = check_strong_truncation_lemma(fam, one, 1.0, {0.5, 1.0, 2.0}, {1.0});
    REQUIRE(verdict.chain_holds);
    REQUIRE_FALSE(verdict.truncations_converge);
    REQUIRE(verdict.family_L1_trend == "flat");
    REQUIRE(verdict.interpolation_holds); // vacuous at p = 1
    REQUIRE_THAT(verdict.uniform_Lp_bound, Catch::Matchers::WithinRel(1.0, 1e-12));
    // || v_n - 1 ||_1 = 2 (n - 1) / n pins the strong-convergence failure.
    for (std::size_t j = 0; j < verdict.member_L1_gaps.size(); ++j) {
      const double n = fam.scale(static_cast<int>(j));
      REQUIRE_THAT(verdict.member_L1_gaps[j],
                   Catch::Matchers::WithinRel(2.0 * (n - 1.0) / n, 1e-12));
    }
  }

  SECTION("the ladder is not p-bounded for any p above one") {
    REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 2.0, {1.0}, {1.0}),
                      ArgumentError);
    REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 1.5, {1.0}, {1.0}),
                      ArgumentError);
  }

  SECTION("weak mechanism: pairings converge while truncations vanish") {
    WeakLimitReport rep = weak_limit_report(fam, one, 1.0);
    REQUIRE(rep.weak_pairing_trend == "converging");
    REQUIRE(rep.l1_trunc_trend == "vanishing");
    // The constant probe is matched exactly at every rung, mass is exactly 1.
    for (const auto& gaps : rep.pairing_gaps) REQUIRE(std::abs(gaps[0]) < 1e-12);
    // || T_1(v_n) ||_1 = 1 / n exactly.
    for (std::size_t j = 0; j < rep.trunc_L1.size(); ++j)
      REQUIRE_THAT(rep.trunc_L1[j],
                   Catch::Matchers::WithinRel(1.0 / fam.scale(static_cast<int>(j)), 1e-12));
  }

  SECTION("the literal cubic amplitude diverges against the same limit") {
    CombFamily cubic(3.0, {10, 100, 1000});
    WeakLimitReport rep = weak_limit_report(cubic, one, 1.0);
    REQUIRE(rep.weak_pairing_trend == "diverging");
    REQUIRE(rep.l1_trunc_trend == "vanishing");
  }
}

TEST_CASE("lemma driver validation", "[trunclab]") {
  CombFamily fam(1.0, {10, 100});
  FamilyLimit one = FamilyLimit::of_constant(1.0);

  REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 0.9, {1.0}, {1.0}),
                    ArgumentError);
  REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 1.0, {}, {1.0}),
                    ArgumentError);
  REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 1.0, {1.0}, {}),
                    ArgumentError);
  REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 1.0, {-1.0}, {1.0}),
                    ArgumentError);
  REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 1.5, {1.0}, {2.0}),
                    ArgumentError);
  REQUIRE_THROWS_AS(check_strong_truncation_lemma(fam, one, 1.5, {1.0}, {0.5}),
                    ArgumentError);
  REQUIRE_THROWS_AS(classify_trend({1.0}), ArgumentError);
  REQUIRE_THROWS_AS(weak_limit_report(fam, one, 0.0), ArgumentError);
}
