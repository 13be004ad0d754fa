// Grid, operator, and norm tests against dense and extended-precision oracles.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "stefanlab/grid.hpp"
#include "stefanlab/linear_solvers.hpp"
#include "stefanlab/norms.hpp"
#include "stefanlab/operators.hpp"

using namespace stefanlab;

TEST_CASE("grid geometry and validation", "[mesh]") {
  Grid g = Grid::line(1.0, 3);
  CHECK(g.spacing(0) == Catch::Approx(0.25).epsilon(1e-15));
  CHECK(g.num_nodes() == 3);
  CHECK(g.coord(0, 0) == Catch::Approx(0.25));
  CHECK(g.coord(2, 0) == Catch::Approx(0.75));

  Grid b = Grid::box(2.0, 1.0, 4, 3);
  CHECK(b.spacing(0) == Catch::Approx(0.4));
  CHECK(b.spacing(1) == Catch::Approx(0.25));
  CHECK(b.num_nodes() == 12);
  CHECK(b.index(1, 2) == 9);
  CHECK(b.cell_volume() == Catch::Approx(0.1));

  CHECK_THROWS_AS(Grid::line(-1.0, 4), ArgumentError);
  CHECK_THROWS_AS(Grid::line(1.0, 1), ArgumentError);
  CHECK_THROWS_AS(Grid(3, {1.0, 1.0}, {4, 4}), ArgumentError);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0}), StructuralError);
  CHECK_THROWS_AS(TimePartition(0.0, 4), ArgumentError);
  CHECK_THROWS_AS(TimePartition(1.0, 0), ArgumentError);
}

TEST_CASE("laplacian spike stencil", "[mesh]") {
  // h = 0.25, unit spike at the middle of three interior nodes.
  Grid g = Grid::line(1.0, 3);
  GridFunction spike(g, {0.0, 1.0, 0.0});
  GridFunction img = apply_laplacian(spike);
  CHECK(img[0] == Catch::Approx(-16.0).epsilon(1e-14));
  CHECK(img[1] == Catch::Approx(32.0).epsilon(1e-14));
  CHECK(img[2] == Catch::Approx(-16.0).epsilon(1e-14));
}

TEST_CASE("laplacian eigen identity", "[mesh]") {
  SECTION("1d") {
    Grid g = Grid::line(1.0, 37);
    GridFunction e = laplacian_eigenfunction(g, 2);
    const double lam = laplacian_eigenvalue(g, 2);
    const double h = g.spacing(0);
    CHECK(lam == Catch::Approx((2.0 / (h * h)) * (1.0 - std::cos(2 * std::numbers::pi * h))));
    GridFunction img = apply_laplacian(e);
    for (std::size_t i = 0; i < e.size(); ++i)
      CHECK(img[i] == Catch::Approx(lam * e[i]).margin(1e-9 * lam));
  }
  SECTION("2d anisotropic") {
    Grid g = Grid::box(1.0, 2.0, 12, 17);
    GridFunction e = laplacian_eigenfunction(g, 3, 2);
    const double lam = laplacian_eigenvalue(g, 3, 2);
    GridFunction img = apply_laplacian(e);
    for (std::size_t i = 0; i < e.size(); ++i)
      CHECK(img[i] == Catch::Approx(lam * e[i]).margin(1e-9 * lam));
  }
}

TEST_CASE("laplacian symmetry and positivity", "[mesh]") {
  Grid g = Grid::box(1.0, 1.5, 7, 5);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    GridFunction a = oracle::random_field(g, 100 + trial);
    GridFunction b = oracle::random_field(g, 200 + trial);
    const double lab = inner(apply_laplacian(a), b);
    const double alb = inner(a, apply_laplacian(b));
    CHECK(lab == Catch::Approx(alb).epsilon(1e-12).margin(1e-12));
    const double quad = inner(apply_laplacian(a), a);
    CHECK(quad > 0.0);
  }
}

TEST_CASE("lp norms", "[mesh]") {
  Grid g = Grid::line(1.0, 9);
  GridFunction c(g, std::vector<double>(9, 3.0));
  // h = 0.1, so ||c||_p = (9 * 0.1 * 3^p)^(1/p).
  CHECK(norm_Lp(c, 1.0) == Catch::Approx(0.9 * 3.0).epsilon(1e-14));
  CHECK(norm_Lp(c, 2.0) == Catch::Approx(3.0 * std::sqrt(0.9)).epsilon(1e-14));
  CHECK(norm_Lp(c, kInf) == Catch::Approx(3.0));

  Grid b = Grid::box(1.0, 1.0, 8, 6);
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    GridFunction f = oracle::random_field(b, 300 + trial, -5.0, 5.0);
    for (double p : {1.0, 1.5, 2.0, 3.0})
      CHECK(norm_Lp(f, p) == Catch::Approx(oracle::longdouble_norm_Lp(f, p)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(norm_Lp(c, 0.5), ArgumentError);
}

TEST_CASE("h10 seminorm summation by parts", "[mesh]") {
  SECTION("identity with laplacian pairing") {
    for (auto g : {Grid::line(1.0, 23), Grid::box(1.0, 0.7, 9, 11)}) {
      for (std::uint64_t trial = 0; trial < 10; ++trial) {
        GridFunction f = oracle::random_field(g, 400 + trial);
        const double a = seminorm_H10(f);
        const double byparts = std::sqrt(inner(apply_laplacian(f), f));
        CHECK(a == Catch::Approx(byparts).epsilon(1e-12));
      }
    }
  }
  SECTION("eigenfunction value") {
    Grid g = Grid::box(1.0, 2.0, 14, 9);
    GridFunction e = laplacian_eigenfunction(g, 2, 3);
    const double lam = laplacian_eigenvalue(g, 2, 3);
    CHECK(seminorm_H10(e) ==
          Catch::Approx(std::sqrt(lam) * norm_Lp(e, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("tridiagonal solve against dense factorization", "[mesh]") {
  auto gen = seeded_stream(7, "tridiag-test");
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  const int n = 40;
  std::vector<double> sub(n - 1), diag(n), sup(n - 1), rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = dist(gen) - 0.5;
  for (int i = 0; i < n - 1; ++i) {
    sub[i] = -dist(gen);
    sup[i] = -dist(gen);
  }
  for (int i = 0; i < n; ++i) {
    double row = (i > 0 ? std::abs(sub[i - 1]) : 0.0) + (i < n - 1 ? std::abs(sup[i]) : 0.0);
    diag[i] = row + dist(gen) + 0.5;
  }
  const std::vector<double> x = solve_tridiagonal(sub, diag, sup, rhs);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = diag[i];
    if (i > 0) a(i, i - 1) = sub[i - 1];
    if (i < n - 1) a(i, i + 1) = sup[i];
    b(i) = rhs[i];
  }
  const Eigen::VectorXd xe = a.fullPivLu().solve(b);
  for (int i = 0; i < n; ++i) CHECK(x[i] == Catch::Approx(xe(i)).epsilon(1e-11).margin(1e-12));
}

TEST_CASE("hminus1 norm against dense oracle", "[mesh]") {
  SECTION("1d, 32 nodes") {
    Grid g = Grid::line(1.0, 32);
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
      GridFunction f = oracle::random_field(g, 500 + trial, -2.0, 2.0);
      CHECK(norm_Hminus1(f) == Catch::Approx(oracle::dense_hminus1(f)).epsilon(1e-10));
    }
  }
  SECTION("2d, 30 nodes") {
    Grid g = Grid::box(1.0, 1.3, 5, 6);
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
      GridFunction f = oracle::random_field(g, 600 + trial, -2.0, 2.0);
      CHECK(norm_Hminus1(f) == Catch::Approx(oracle::dense_hminus1(f)).epsilon(1e-10));
    }
  }
}

TEST_CASE("hminus1 eigen relation and duality", "[mesh]") {
  Grid g = Grid::line(1.0, 64);
  GridFunction e = laplacian_eigenfunction(g, 3);
  const double lam = laplacian_eigenvalue(g, 3);
  CHECK(norm_Hminus1(e) ==
        Catch::Approx(norm_Lp(e, 2.0) / std::sqrt(lam)).epsilon(1e-11));

  PoissonSolver solver(g);
  GridFunction f = oracle::random_field(g, 7100);
  auto [value, witness] = norm_Hminus1_with_witness(f, solver);
  // Witness solves the Dirichlet problem.
  GridFunction back = apply_laplacian(witness);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(back[i] == Catch::Approx(f[i]).margin(1e-8));
  // Duality: value * |witness|_H10 equals the pairing h^d sum f w.
  CHECK(value * seminorm_H10(witness) == Catch::Approx(inner(f, witness)).epsilon(1e-10));
}

TEST_CASE("conjugate gradient matches dense solve", "[mesh]") {
  Grid g = Grid::box(1.0, 1.0, 6, 5);
  const Eigen::MatrixXd a = oracle::dense_neg_laplacian(g);
  GridFunction f = oracle::random_field(g, 800);
  PoissonSolver solver(g);
  const GridFunction w = solver.solve(f);
  Eigen::VectorXd rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs(i) = f[i];
  const Eigen::VectorXd we = a.fullPivLu().solve(rhs);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(w[i] == Catch::Approx(we(i)).epsilon(1e-8).margin(1e-10));
}

TEST_CASE("bochner norms", "[mesh]") {
  Grid g = Grid::line(1.0, 2);
  // h = 1/3. States chosen so every norm is hand-checkable.
  GridFunction s0(g, {1.0, 2.0});
  GridFunction s1(g, {3.0, 4.0});
  Trajectory traj(TimePartition(0.5, 1), {s0, s1});
  // Left endpoint: only s0 enters finite-q values. ||s0||_2^2 = 5/3.
  CHECK(bochner_norm(traj, NormSelector::L2(), 2.0) ==
        Catch::Approx(std::sqrt(0.5 * 5.0 / 3.0)).epsilon(1e-14));
  CHECK(bochner_norm(traj, NormSelector::L1(), 1.0) == Catch::Approx(0.5).epsilon(1e-14));
  // Sup in time sees both states.
  CHECK(bochner_norm(traj, NormSelector::Linf(), kInf) == Catch::Approx(4.0));

  SECTION("constant trajectory and time Hoelder") {
    Grid b = Grid::box(1.0, 1.0, 6, 6);
    GridFunction c = oracle::random_field(b, 900);
    std::vector<GridFunction> states(9, c);
    Trajectory ct(TimePartition(2.0, 8), states);
    CHECK(bochner_norm(ct, NormSelector::L2(), 2.0) ==
          Catch::Approx(std::sqrt(2.0) * norm_Lp(c, 2.0)).epsilon(1e-13));
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      std::vector<GridFunction> rs;
      for (int m = 0; m < 9; ++m) rs.push_back(oracle::random_field(b, 1000 + 16 * trial + m));
      Trajectory rt(TimePartition(2.0, 8), rs);
      const double sup = bochner_norm(rt, NormSelector::L2(), kInf);
      const double l2 = bochner_norm(rt, NormSelector::L2(), 2.0);
      CHECK(sup >= l2 / std::sqrt(2.0) - 1e-12);
    }
  }
}

TEST_CASE("discrete time derivative telescopes", "[mesh]") {
  Grid g = Grid::box(1.0, 1.0, 5, 4);
  std::vector<GridFunction> states;
  for (int m = 0; m < 7; ++m) states.push_back(oracle::random_field(g, 1100 + m));
  Trajectory traj(TimePartition(0.7, 6), states);
  auto diffs = discrete_time_derivative(traj);
  REQUIRE(diffs.size() == 6);
  const double dt = traj.partition().dt();
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    double acc = 0.0;
    for (const auto& d : diffs) acc += dt * d[i];
    CHECK(acc == Catch::Approx(states.back()[i] - states.front()[i]).margin(1e-13));
  }
  CHECK_THROWS_AS(Trajectory(TimePartition(1.0, 3), states), StructuralError);
}
