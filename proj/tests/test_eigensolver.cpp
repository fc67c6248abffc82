#include "specineq/eigensolver.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace specineq;

namespace {

// 5-point Laplacian on an m x m grid plus a random positive diagonal
SparseMatrix grid_operator(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pot(0.0, 0.5);
  std::vector<Eigen::Triplet<double>> t;
  auto id = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      t.emplace_back(id(i, j), id(i, j), 4.0 + pot(rng));
      if (i + 1 < m) {
        t.emplace_back(id(i, j), id(i + 1, j), -1.0);
        t.emplace_back(id(i + 1, j), id(i, j), -1.0);
      }
      if (j + 1 < m) {
        t.emplace_back(id(i, j), id(i, j + 1), -1.0);
        t.emplace_back(id(i, j + 1), id(i, j), -1.0);
      }
    }
  SparseMatrix a(m * m, m * m);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::VectorXd dense_oracle(const SparseMatrix& h, const Eigen::VectorXd& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h), Eigen::MatrixXd(mass.asDiagonal()));
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("LOBPCG agrees with the dense generalized solver") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  const SparseMatrix h = grid_operator(28, rng);
  Eigen::VectorXd mass(h.rows());
  for (Eigen::Index i = 0; i < mass.size(); ++i) mass[i] = w(rng);

  SolveConfig cfg;
  cfg.count = 12;
  cfg.method = SolveMethod::Lobpcg;
  const auto sol = solve_smallest(h, mass, cfg);
  CHECK_FALSE(sol.dense);
  const Eigen::VectorXd oracle = dense_oracle(h, mass);
  for (int i = 0; i < 12; ++i) CHECK(sol.values[i] == doctest::Approx(oracle[i]).epsilon(1e-9));

  const auto report = residual_report(h, mass, sol);
  CHECK(report.within(1e-8, sol.values));
  CHECK(report.orthonormality_defect < 1e-10);
}

TEST_CASE("dense path and clustered spectra") {
  // diagonal operator with a 4-fold cluster
  const int n = 50;
  SparseMatrix h(n, n);
  for (int i = 0; i < n; ++i) h.insert(i, i) = i < 4 ? 1.0 : 1.0 + i;
  const Eigen::VectorXd mass = Eigen::VectorXd::Ones(n);
  for (auto method : {SolveMethod::Dense, SolveMethod::Lobpcg}) {
    SolveConfig cfg;
    cfg.count = 6;
    cfg.method = method;
    const auto sol = solve_smallest(h, mass, cfg);
    for (int i = 0; i < 4; ++i) CHECK(sol.values[i] == doctest::Approx(1.0));
    CHECK(sol.values[4] == doctest::Approx(5.0));
    CHECK(sol.values[5] == doctest::Approx(6.0));
  }
}

TEST_CASE("solves are deterministic for a fixed seed") {
  std::mt19937_64 rng(1);
  const SparseMatrix h = grid_operator(26, rng);
  const Eigen::VectorXd mass = Eigen::VectorXd::Ones(h.rows());
  SolveConfig cfg;
  cfg.count = 8;
  cfg.method = SolveMethod::Lobpcg;
  const auto a = solve_smallest(h, mass, cfg);
  const auto b = solve_smallest(h, mass, cfg);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("preconditions and failures") {
  SparseMatrix h(3, 3);
  h.insert(0, 0) = 1;
  h.insert(1, 1) = 2;
  h.insert(2, 2) = 3;
  h.insert(0, 1) = 0.5;
  SolveConfig cfg;
  cfg.count = 2;
  CHECK_THROWS_AS(solve_smallest(h, Eigen::VectorXd::Ones(3), cfg), std::invalid_argument);
  h.insert(1, 0) = 0.5;
  CHECK_THROWS_AS(solve_smallest(h, Eigen::Vector3d(1, 0, 1), cfg), std::invalid_argument);
  cfg.count = 4;
  CHECK_THROWS_AS(solve_smallest(h, Eigen::VectorXd::Ones(3), cfg), std::invalid_argument);

  std::mt19937_64 rng(2);
  const SparseMatrix big = grid_operator(30, rng);
  SolveConfig hard;
  hard.count = 10;
  hard.method = SolveMethod::Lobpcg;
  hard.max_iterations = 1;
  hard.tolerance = 1e-14;
  try {
    solve_smallest(big, Eigen::VectorXd::Ones(big.rows()), hard);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.best_residuals().size() == 10);
  }
}

TEST_CASE("commutator inequality on random symmetric matrices") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> dims(2, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = dims(rng);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
    const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g[i] = gauss(rng);
    const double scale = std::pow(h.norm(), 3);
    for (int k = 1; k < dim; ++k) {
      const auto c = commutator_lemma_check(h, g, static_cast<std::size_t>(k));
      CHECK(c.margin() >= -1e-10 * scale);
    }
  }
  CHECK_THROWS_AS(commutator_lemma_check(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(3), 3),
                  std::domain_error);
}
