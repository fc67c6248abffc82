#pragma once

#include "specineq/laplacian.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace specineq {

enum class SolveMethod { Auto, Dense, Lobpcg };

struct SolveConfig {
  std::size_t count = 10;
  double tolerance = 1e-9;  ///< residual bound relative to max(1, |lambda|)
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
  SolveMethod method = SolveMethod::Auto;
  Eigen::Index dense_threshold = 600;  ///< Auto uses the dense path up to this dimension
};

/// Smallest eigenpairs of H u = lambda M u. Vectors are M-orthonormal.
struct EigenSolution {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;  ///< ||H u - lambda M u||_{M^-1}
  int iterations = 0;
  bool dense = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Eigen::VectorXd best_residuals)
      : std::runtime_error(what), best_residuals_(std::move(best_residuals)) {}
  const Eigen::VectorXd& best_residuals() const { return best_residuals_; }

 private:
  Eigen::VectorXd best_residuals_;
};

/// k smallest generalized eigenpairs. H must be symmetric (checked) and M positive.
/// Deterministic for a fixed seed. Throws SolverError on non-convergence and
/// std::invalid_argument on violated preconditions.
EigenSolution solve_smallest(const SparseMatrix& h, const Eigen::VectorXd& mass, const SolveConfig& config);
EigenSolution solve_smallest(const Eigen::MatrixXd& h, const Eigen::VectorXd& mass, const SolveConfig& config);

struct ResidualReport {
  Eigen::VectorXd residuals;            ///< ||H u_i - lambda_i M u_i||_{M^-1}
  double orthonormality_defect = 0;     ///< max |u_i^T M u_j - delta_ij|
  bool within(double tol, const Eigen::VectorXd& values) const;
};

ResidualReport residual_report(const SparseMatrix& h, const Eigen::VectorXd& mass, const EigenSolution& solution);

/// Both sides of
///   sum_{i<=k} (l_{k+1} - l_i)^2 <[H,G]u_i, G u_i> <= sum_{i<=k} (l_{k+1} - l_i) ||[H,G]u_i||^2
/// for a dense symmetric H and diagonal G = diag(g), from the full eigendecomposition of H.
struct CommutatorCheck {
  double lhs = 0;
  double rhs = 0;
  double margin() const { return rhs - lhs; }
};

CommutatorCheck commutator_lemma_check(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, std::size_t k);

}  // namespace specineq
