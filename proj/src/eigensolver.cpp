#include "specineq/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace specineq {

namespace {

void check_mass(const Eigen::VectorXd& mass, Eigen::Index n) {
  if (mass.size() != n) throw std::invalid_argument("mass vector size does not match the matrix");
  if (!(mass.array() > 0).all() || !mass.allFinite()) throw std::invalid_argument("mass entries must be positive");
}

void check_symmetric(const SparseMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
  const SparseMatrix diff = SparseMatrix(h.transpose()) - h;
  double scale = 0, asym = 0;
  for (int c = 0; c < h.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(h, c); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (int c = 0; c < diff.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) asym = std::max(asym, std::abs(it.value()));
  if (asym > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

// Uniform [-1, 1) from raw 64-bit draws; identical on every standard library.
Eigen::MatrixXd random_block(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
  return x;
}

// Orthonormalises the columns of v against the orthonormal columns of q and each other
// (two passes of projection + Gram-eigendecomposition). Nearly dependent directions are dropped.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& q, Eigen::MatrixXd v) {
  for (int pass = 0; pass < 2 && v.cols() > 0; ++pass) {
    if (q.cols() > 0) v -= q * (q.transpose() * v);
    const Eigen::MatrixXd gram = v.transpose() * v;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double top = es.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
      if (es.eigenvalues()[i] > 1e-14 * top && es.eigenvalues()[i] > 0) keep.push_back(i);
    Eigen::MatrixXd basis(v.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      const Eigen::Index i = keep[c];
      basis.col(static_cast<Eigen::Index>(c)) = v * es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()[i]);
    }
    v = std::move(basis);
  }
  return v;
}

EigenSolution finish(const Eigen::VectorXd& scale_inv, Eigen::VectorXd values, const Eigen::MatrixXd& y,
                     Eigen::VectorXd residuals, int iterations, bool dense) {
  EigenSolution sol;
  sol.values = std::move(values);
  sol.vectors = scale_inv.asDiagonal() * y;
  sol.residuals = std::move(residuals);
  sol.iterations = iterations;
  sol.dense = dense;
  return sol;
}

EigenSolution dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& scale_inv, std::size_t count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw SolverError("dense eigendecomposition failed", Eigen::VectorXd());
  const auto k = static_cast<Eigen::Index>(count);
  const Eigen::MatrixXd y = es.eigenvectors().leftCols(k);
  const Eigen::VectorXd values = es.eigenvalues().head(k);
  const Eigen::VectorXd res = (a * y - y * values.asDiagonal()).colwise().norm().transpose();
  return finish(scale_inv, values, y, res, 1, true);
}

// Approximate inverse of a + shift*I: a sparse LDL^T factorisation, falling back to
// incomplete Cholesky when the factorisation fails.
class Preconditioner {
 public:
  explicit Preconditioner(const SparseMatrix& a) {
    const double shift = 1e-3 * Eigen::VectorXd(a.diagonal()).mean();
    SparseMatrix shifted = a;
    for (int i = 0; i < a.rows(); ++i) shifted.coeffRef(i, i) += shift;
    ldlt_.compute(shifted);
    if (ldlt_.info() == Eigen::Success) {
      mode_ = Mode::Ldlt;
      return;
    }
    ic_.compute(shifted);
    if (ic_.info() == Eigen::Success) mode_ = Mode::Incomplete;
  }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& r) const {
    switch (mode_) {
      case Mode::Ldlt: return ldlt_.solve(r);
      case Mode::Incomplete: {
        Eigen::MatrixXd out(r.rows(), r.cols());
        for (Eigen::Index j = 0; j < r.cols(); ++j) out.col(j) = ic_.solve(r.col(j));
        return out;
      }
      case Mode::None: break;
    }
    return r;
  }

 private:
  enum class Mode { None, Ldlt, Incomplete };
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic_;
  Mode mode_ = Mode::None;
};

// Block LOBPCG (orthonormal-basis variant) for the smallest `count` eigenpairs of symmetric a.
EigenSolution lobpcg(const SparseMatrix& a, const Eigen::VectorXd& scale_inv, const SolveConfig& cfg) {
  const Eigen::Index n = a.rows();
  const auto k = static_cast<Eigen::Index>(cfg.count);
  const Eigen::Index block = std::min<Eigen::Index>(n, k + std::max<Eigen::Index>(8, k));
  const Preconditioner precond(a);

  Eigen::MatrixXd x = orthonormalize(Eigen::MatrixXd(), random_block(n, block, cfg.seed));
  Eigen::MatrixXd p(n, 0);
  Eigen::VectorXd theta;
  Eigen::VectorXd res = Eigen::VectorXd::Constant(block, std::numeric_limits<double>::infinity());

  {
    const Eigen::MatrixXd ax = a * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.transpose() * ax);
    x = x * es.eigenvectors();
    theta = es.eigenvalues();
  }

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const Eigen::MatrixXd ax = a * x;
    const Eigen::MatrixXd r = ax - x * theta.asDiagonal();
    res = r.colwise().norm().transpose();

    std::vector<Eigen::Index> active;
    bool wanted_done = true;
    for (Eigen::Index j = 0; j < block; ++j) {
      const bool ok = res[j] <= cfg.tolerance * std::max(1.0, std::abs(theta[j]));
      if (!ok) active.push_back(j);
      if (j < k && !ok) wanted_done = false;
    }
    if (wanted_done) return finish(scale_inv, theta.head(k), x.leftCols(k), res.head(k), iter, false);

    Eigen::MatrixXd ra(n, static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c) ra.col(static_cast<Eigen::Index>(c)) = r.col(active[c]);
    const Eigen::MatrixXd w = orthonormalize(x, precond.apply(ra));
    Eigen::MatrixXd wp(n, w.cols() + p.cols());
    wp << w, p;
    const Eigen::MatrixXd extra = orthonormalize(x, wp);

    Eigen::MatrixXd s(n, block + extra.cols());
    s << x, extra;
    const Eigen::MatrixXd as = a * s;
    Eigen::MatrixXd proj = s.transpose() * as;
    proj = 0.5 * (proj + proj.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj);
    const Eigen::MatrixXd c = es.eigenvectors().leftCols(block);
    theta = es.eigenvalues().head(block);
    x = s * c;
    p = extra * c.bottomRows(extra.cols());
  }
  throw SolverError("LOBPCG did not converge in " + std::to_string(cfg.max_iterations) + " iterations (worst residual " +
                        std::to_string(res.head(k).maxCoeff()) + ")",
                    res.head(k));
}

}  // namespace

EigenSolution solve_smallest(const SparseMatrix& h, const Eigen::VectorXd& mass, const SolveConfig& config) {
  check_symmetric(h);
  check_mass(mass, h.rows());
  if (config.count < 1) throw std::invalid_argument("eigenpair count must be >= 1");
  if (!(config.tolerance > 0)) throw std::invalid_argument("solver tolerance must be positive");
  if (static_cast<Eigen::Index>(config.count) > h.rows())
    throw std::invalid_argument("requested more eigenpairs than the matrix dimension");

  // M^{-1/2} H M^{-1/2} y = lambda y with u = M^{-1/2} y
  const Eigen::VectorXd scale_inv = mass.cwiseSqrt().cwiseInverse();
  SparseMatrix a = scale_inv.asDiagonal() * h * scale_inv.asDiagonal();
  a = 0.5 * (a + SparseMatrix(a.transpose()));

  const bool dense = config.method == SolveMethod::Dense ||
                     (config.method == SolveMethod::Auto &&
                      (h.rows() <= config.dense_threshold || 3 * static_cast<Eigen::Index>(config.count) >= h.rows()));
  if (dense) return dense_solve(Eigen::MatrixXd(a), scale_inv, config.count);
  return lobpcg(a, scale_inv, config);
}

EigenSolution solve_smallest(const Eigen::MatrixXd& h, const Eigen::VectorXd& mass, const SolveConfig& config) {
  return solve_smallest(SparseMatrix(h.sparseView()), mass, config);
}

bool ResidualReport::within(double tol, const Eigen::VectorXd& values) const {
  for (Eigen::Index i = 0; i < residuals.size(); ++i)
    if (residuals[i] > tol * std::max(1.0, std::abs(values[i]))) return false;
  return orthonormality_defect <= tol * std::max<double>(1.0, static_cast<double>(residuals.size()));
}

ResidualReport residual_report(const SparseMatrix& h, const Eigen::VectorXd& mass, const EigenSolution& solution) {
  const Eigen::MatrixXd& u = solution.vectors;
  const Eigen::MatrixXd r = h * u - mass.asDiagonal() * u * solution.values.asDiagonal();
  ResidualReport out;
  out.residuals = (mass.cwiseSqrt().cwiseInverse().asDiagonal() * r).colwise().norm().transpose();
  const Eigen::MatrixXd gram = u.transpose() * mass.asDiagonal() * u;
  out.orthonormality_defect = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  return out;
}

CommutatorCheck commutator_lemma_check(const Eigen::MatrixXd& h, const Eigen::VectorXd& g, std::size_t k) {
  const Eigen::Index dim = h.rows();
  if (h.cols() != dim || g.size() != dim) throw std::invalid_argument("commutator check: size mismatch");
  if (k < 1 || static_cast<Eigen::Index>(k) >= dim) throw std::domain_error("commutator check needs 1 <= k < dim");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  // [H, G]_ij = H_ij (g_j - g_i)
  const Eigen::MatrixXd comm = h * g.asDiagonal() - g.asDiagonal() * h;

  CommutatorCheck out;
  const double top = lambda[static_cast<Eigen::Index>(k)];
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
    const Eigen::VectorXd u = es.eigenvectors().col(i);
    const Eigen::VectorXd cu = comm * u;
    const double gap = top - lambda[i];
    out.lhs += gap * gap * cu.dot(g.cwiseProduct(u));
    out.rhs += gap * cu.squaredNorm();
  }
  return out;
}

}  // namespace specineq
