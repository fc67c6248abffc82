#include "specineq/heisenberg.hpp"
#include "specineq/inequalities.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace specineq;

namespace {

std::vector<double> dense_spectrum(const SparseMatrix& l) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(l)};
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("grid geometry") {
  const auto g = make_box_grid(1, 0.0, 1.0, 4);
  CHECK(g.dims() == 3);
  CHECK(g.node_count() == 64);
  CHECK(g.spacing(0) == doctest::Approx(0.2));
  CHECK(g.coordinate(2, 0) == doctest::Approx(0.2));
  CHECK(g.cell_volume() == doctest::Approx(0.008));
  CHECK(make_box_grid(2, -1, 1, 4).node_count() == 1024);
  CHECK_THROWS_AS(make_box_grid(0, 0, 1, 4), std::domain_error);
  CHECK_THROWS_AS(make_box_grid(1, 1, 0, 4), std::domain_error);
  CHECK_THROWS_AS(make_box_grid(1, 0, 1, 0), std::domain_error);
  CHECK_THROWS_AS(make_box_grid(1, 0, 1, 5), std::domain_error);
}

TEST_CASE("Kohn operator is exactly symmetric and positive") {
  for (int n : {1, 2}) {
    const auto op = assemble_kohn(make_box_grid(n, -0.5, 1.0, n == 1 ? 8 : 4));
    const SparseMatrix t = op.laplacian.transpose();
    CHECK((op.laplacian - t).norm() == 0.0);
    CHECK(op.fields.size() == static_cast<std::size_t>(2 * n));
    CHECK(dense_spectrum(op.laplacian).front() > 0);
  }
}

TEST_CASE("one even axis count removes the zero mode") {
  HeisenbergGrid g;
  g.n = 1;
  g.lower = {-0.5, -0.5, -0.5};
  g.upper = {1.0, 1.0, 1.0};
  for (int axis = 0; axis < 3; ++axis) {
    g.counts = {5, 5, 5};
    g.counts[static_cast<std::size_t>(axis)] = 4;
    CHECK(dense_spectrum(assemble_kohn(g).laplacian).front() > 1e-3);
  }
  g.counts = {5, 5, 5};
  CHECK_THROWS_AS(assemble_kohn(g), std::domain_error);
}

TEST_CASE("frozen coefficients reproduce the separable oracle") {
  const int nx = 5, ny = 6, nt = 4;
  HeisenbergGrid g;
  g.n = 1;
  g.lower = {0, 0, 0};
  g.upper = {1.0, 1.5, 2.0};
  g.counts = {nx, ny, nt};
  const auto op = assemble_kohn(g, true);
  // centred differences: D^T D has eigenvalues cos^2(p pi/(N+1)) / h^2, p = 1..N; t is free
  std::vector<double> oracle;
  for (int p = 1; p <= nx; ++p)
    for (int q = 1; q <= ny; ++q) {
      const double ex = std::pow(std::cos(p * std::numbers::pi / (nx + 1)) / g.spacing(0), 2);
      const double ey = std::pow(std::cos(q * std::numbers::pi / (ny + 1)) / g.spacing(1), 2);
      for (int r = 0; r < nt; ++r) oracle.push_back(ex + ey);
    }
  std::sort(oracle.begin(), oracle.end());
  const auto got = dense_spectrum(op.laplacian);
  REQUIRE(got.size() == oracle.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
}

TEST_CASE("spectrum is invariant under translation in t") {
  auto a = make_box_grid(1, 0.0, 1.0, 6);
  auto b = a;
  b.lower[2] = 5.0;
  b.upper[2] = 6.0;
  const auto la = dense_spectrum(assemble_kohn(a).laplacian);
  const auto lb = dense_spectrum(assemble_kohn(b).laplacian);
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(lb[i] == doctest::Approx(la[i]).epsilon(1e-10));
}

TEST_CASE("sparse solve matches the dense spectrum of vol * L against vol * I") {
  const auto g = make_box_grid(1, 0.0, 1.0, 10);
  SolveConfig cfg;
  cfg.method = SolveMethod::Lobpcg;
  const auto l = solve_kohn(g, 8, cfg);
  const auto oracle = dense_spectrum(assemble_kohn(g).laplacian);
  for (std::size_t i = 0; i < 8; ++i) CHECK(l[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
}

TEST_CASE("first eigenvalue converges under refinement") {
  SolveConfig cfg;
  const double coarse = solve_kohn(make_box_grid(1, 0, 1, 12), 1, cfg)[0];
  const double fine = solve_kohn(make_box_grid(1, 0, 1, 16), 1, cfg)[0];
  CHECK(fine > 0);
  CHECK(std::abs(fine - coarse) / fine < 0.05);
}

TEST_CASE("Kohn inequality on a coarse grid") {
  SolveConfig cfg;
  const auto l = solve_kohn(make_box_grid(1, 0, 1, 12), 11, cfg);
  for (std::size_t k = 1; k <= 10; ++k) {
    const auto sides = kohn_sides(1, l, k);
    CHECK(sides.margin() >= -1e-3 * std::max(sides.lhs, sides.rhs));
    const auto b = kohn_bounds(1, l, k);
    CHECK(l[k] <= b.bound.upper * (1 + 1e-3));
    CHECK(b.bound.upper <= b.simple);
  }
  CHECK_THROWS_AS(solve_kohn(make_box_grid(1, 0, 1, 2), 8, cfg), std::domain_error);
}

// recorded from the 32^3 run that passes the acceptance checks; run as its own ctest entry
TEST_CASE("golden: [0,1]^3 at 32^3, ten smallest eigenvalues") {
  const std::vector<double> golden = {1.15551566416704, 1.15551566416705, 2.54141419380831, 2.54141419380834,
                                      2.74496839566905, 2.74496839566908, 2.85852872659428, 2.85852872659432,
                                      3.71430747192096, 3.71430747192101};
  SolveConfig cfg;
  const auto l = solve_kohn(make_box_grid(1, 0, 1, 32), 10, cfg);
  for (std::size_t i = 0; i < golden.size(); ++i) CHECK(l[i] == doctest::Approx(golden[i]).epsilon(1e-8));
  const double coarse = solve_kohn(make_box_grid(1, 0, 1, 16), 1, cfg)[0];
  CHECK(std::abs(coarse - l[0]) / l[0] < 0.05);
}
