#pragma once

#include "specineq/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

namespace specineq {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Piecewise-linear weak form of -Delta (+ q): H u = lambda M u with M diagonal.
struct DiscreteOperator {
  SparseMatrix stiffness;        ///< symmetric positive semidefinite
  Eigen::VectorXd mass;          ///< lumped vertex areas, all positive
  std::vector<int> interior_map; ///< row -> mesh vertex
};

/// Cotangent stiffness and barycentric (one third of incident areas) lumped mass.
/// Throws MeshError naming the first degenerate triangle.
DiscreteOperator assemble_laplacian(const ImmersedMesh& mesh);

/// Discrete mean curvature vector h_v = -(S X)_v / M_vv (so that h = Delta X).
struct MeanCurvatureField {
  Vertices h;                  ///< one R^m vector per vertex
  Eigen::VectorXd norm_sq;     ///< |h_v|^2
  std::vector<char> regular;   ///< valence 6, no incident triangle on the boundary
  double sup_sq = 0;           ///< max |h_v|^2 over regular vertices
  double mean_sq = 0;          ///< (1/V) int |h|^2 (all vertices, mass weighted)
};

MeanCurvatureField mean_curvature(const ImmersedMesh& mesh, const DiscreteOperator& op);

/// H = S + M diag(q).
SparseMatrix assemble_schrodinger(const DiscreteOperator& op, const Eigen::VectorXd& q);

/// delta_i = sum_v (|h_v|^2/4 - q_v) u_i(v)^2 M_vv for M-orthonormal columns u_i.
/// Throws std::invalid_argument when a column is not M-normalised within `tol`.
std::vector<double> delta_integrals(const Eigen::MatrixXd& eigvecs, const Eigen::VectorXd& h_sq,
                                    const Eigen::VectorXd& q, const Eigen::VectorXd& mass, double tol = 1e-6);

/// int q u_i^2 for M-orthonormal columns.
std::vector<double> potential_integrals(const Eigen::MatrixXd& eigvecs, const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& mass);

/// Removes boundary rows/columns. Identity on closed meshes. Throws std::domain_error
/// when no interior vertex remains.
DiscreteOperator apply_dirichlet(const ImmersedMesh& mesh, const DiscreteOperator& op);

/// Restricts a symmetric matrix and a per-vertex field to the rows kept by `restricted`.
SparseMatrix restrict_matrix(const SparseMatrix& full, const std::vector<int>& interior_map);
Eigen::VectorXd restrict_vector(const Eigen::VectorXd& full, const std::vector<int>& interior_map);

/// Map into a sphere whose components share one Laplace eigenvalue.
struct EigenmapData {
  Eigen::MatrixXd components;  ///< vertex x (m+1)
  double lambda_map = 0;
};

struct EigenmapValidation {
  double max_norm_deviation = 0;    ///< max_v |sum_a phi_a(v)^2 - 1|
  double max_energy_deviation = 0;  ///< max_T |sum_a |grad phi_a|^2 - lambda_map|
  bool passed = false;
};

EigenmapValidation validate_eigenmap(const ImmersedMesh& mesh, const EigenmapData& map, double norm_tol,
                                     double energy_tol);

/// Per-triangle energy density sum_a |grad phi_a|^2 of the piecewise-linear interpolant.
Eigen::VectorXd energy_density(const ImmersedMesh& mesh, const Eigen::MatrixXd& components);

}  // namespace specineq
