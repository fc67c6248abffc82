#include "specineq/laplacian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace specineq {

DiscreteOperator assemble_laplacian(const ImmersedMesh& mesh) {
  const int nv = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 12);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(nv);

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const int idx[3] = {mesh.triangles(t, 0), mesh.triangles(t, 1), mesh.triangles(t, 2)};
    for (int i : idx)
      if (i < 0 || i >= nv) throw MeshError("triangle " + std::to_string(t) + " references a missing vertex");

    const Eigen::VectorXd e01 = (mesh.vertices.row(idx[1]) - mesh.vertices.row(idx[0])).transpose();
    const Eigen::VectorXd e02 = (mesh.vertices.row(idx[2]) - mesh.vertices.row(idx[0])).transpose();
    const double gram = e01.squaredNorm() * e02.squaredNorm() - std::pow(e01.dot(e02), 2);
    const double twice_area = std::sqrt(std::max(0.0, gram));
    const double longest = std::max({e01.squaredNorm(), e02.squaredNorm(), (e02 - e01).squaredNorm()});
    if (!(twice_area > 2e-12 * longest))
      throw MeshError("degenerate triangle " + std::to_string(t) + " (" + std::to_string(idx[0]) + ", " +
                      std::to_string(idx[1]) + ", " + std::to_string(idx[2]) + ")");

    for (int c = 0; c < 3; ++c) {
      const int i = idx[c], j = idx[(c + 1) % 3], k = idx[(c + 2) % 3];
      const Eigen::VectorXd a = (mesh.vertices.row(j) - mesh.vertices.row(i)).transpose();
      const Eigen::VectorXd b = (mesh.vertices.row(k) - mesh.vertices.row(i)).transpose();
      // half the cotangent of the angle at i, weighting the opposite edge (j, k)
      const double w = 0.5 * a.dot(b) / twice_area;
      entries.emplace_back(j, k, -w);
      entries.emplace_back(k, j, -w);
      entries.emplace_back(j, j, w);
      entries.emplace_back(k, k, w);
    }
    const double third = twice_area / 6.0;
    for (int i : idx) mass[i] += third;
  }

  DiscreteOperator op;
  op.stiffness.resize(nv, nv);
  op.stiffness.setFromTriplets(entries.begin(), entries.end());
  op.stiffness.makeCompressed();
  op.mass = std::move(mass);
  op.interior_map.resize(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) op.interior_map[static_cast<std::size_t>(v)] = v;
  return op;
}

MeanCurvatureField mean_curvature(const ImmersedMesh& mesh, const DiscreteOperator& op) {
  const int nv = mesh.vertex_count();
  if (op.stiffness.rows() != nv) throw std::invalid_argument("mean_curvature needs the unrestricted operator");

  MeanCurvatureField field;
  const Eigen::MatrixXd sx = op.stiffness * Eigen::MatrixXd(mesh.vertices);
  field.h = -(op.mass.cwiseInverse().asDiagonal() * sx);
  field.norm_sq = field.h.rowwise().squaredNorm();

  // regular: valence 6 and no incident triangle touching the boundary
  std::vector<int> valence(static_cast<std::size_t>(nv), 0);
  std::vector<char> on_boundary(static_cast<std::size_t>(nv), 0);
  for (int b : mesh.boundary_vertices) on_boundary[static_cast<std::size_t>(b)] = 1;
  std::vector<char> near_boundary(static_cast<std::size_t>(nv), 0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    bool touches = false;
    for (int c = 0; c < 3; ++c) {
      const auto v = static_cast<std::size_t>(mesh.triangles(t, c));
      ++valence[v];
      touches = touches || on_boundary[v];
    }
    if (touches)
      for (int c = 0; c < 3; ++c) near_boundary[static_cast<std::size_t>(mesh.triangles(t, c))] = 1;
  }
  field.regular.assign(static_cast<std::size_t>(nv), 0);
  for (std::size_t v = 0; v < field.regular.size(); ++v) field.regular[v] = valence[v] == 6 && !near_boundary[v];

  for (int v = 0; v < nv; ++v)
    if (field.regular[static_cast<std::size_t>(v)]) field.sup_sq = std::max(field.sup_sq, field.norm_sq[v]);
  field.mean_sq = field.norm_sq.dot(op.mass) / op.mass.sum();
  return field;
}

SparseMatrix assemble_schrodinger(const DiscreteOperator& op, const Eigen::VectorXd& q) {
  if (q.size() != op.mass.size()) throw std::invalid_argument("potential size does not match the operator");
  if (!q.allFinite()) throw std::invalid_argument("potential must be finite");
  SparseMatrix diag(op.mass.size(), op.mass.size());
  diag.reserve(Eigen::VectorXi::Constant(op.mass.size(), 1));
  for (Eigen::Index v = 0; v < op.mass.size(); ++v) diag.insert(v, v) = op.mass[v] * q[v];
  SparseMatrix h = op.stiffness + diag;
  h.makeCompressed();
  return h;
}

std::vector<double> delta_integrals(const Eigen::MatrixXd& eigvecs, const Eigen::VectorXd& h_sq,
                                    const Eigen::VectorXd& q, const Eigen::VectorXd& mass, double tol) {
  if (eigvecs.rows() != mass.size() || h_sq.size() != mass.size() || q.size() != mass.size())
    throw std::invalid_argument("delta_integrals: size mismatch");
  const Eigen::VectorXd integrand = 0.25 * h_sq - q;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(eigvecs.cols()));
  for (Eigen::Index i = 0; i < eigvecs.cols(); ++i) {
    const Eigen::VectorXd u2 = eigvecs.col(i).cwiseAbs2();
    const double norm = u2.dot(mass);
    if (std::abs(norm - 1.0) > tol)
      throw std::invalid_argument("eigenvector " + std::to_string(i) + " is not M-normalised (norm^2 = " +
                                  std::to_string(norm) + ")");
    out.push_back(u2.cwiseProduct(mass).dot(integrand));
  }
  return out;
}

std::vector<double> potential_integrals(const Eigen::MatrixXd& eigvecs, const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& mass) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < eigvecs.cols(); ++i) out.push_back(eigvecs.col(i).cwiseAbs2().cwiseProduct(mass).dot(q));
  return out;
}

SparseMatrix restrict_matrix(const SparseMatrix& full, const std::vector<int>& interior_map) {
  std::vector<int> row_of(static_cast<std::size_t>(full.rows()), -1);
  for (std::size_t r = 0; r < interior_map.size(); ++r) row_of[static_cast<std::size_t>(interior_map[r])] = static_cast<int>(r);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(full.nonZeros()));
  for (int col = 0; col < full.outerSize(); ++col) {
    const int c = row_of[static_cast<std::size_t>(col)];
    if (c < 0) continue;
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      const int r = row_of[static_cast<std::size_t>(it.row())];
      if (r >= 0) entries.emplace_back(r, c, it.value());
    }
  }
  const auto n = static_cast<Eigen::Index>(interior_map.size());
  SparseMatrix out(n, n);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& full, const std::vector<int>& interior_map) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(interior_map.size()));
  for (std::size_t r = 0; r < interior_map.size(); ++r) out[static_cast<Eigen::Index>(r)] = full[interior_map[r]];
  return out;
}

DiscreteOperator apply_dirichlet(const ImmersedMesh& mesh, const DiscreteOperator& op) {
  if (mesh.boundary_vertices.empty()) return op;
  std::vector<char> keep(static_cast<std::size_t>(mesh.vertex_count()), 1);
  for (int b : mesh.boundary_vertices) keep[static_cast<std::size_t>(b)] = 0;
  DiscreteOperator out;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    if (keep[static_cast<std::size_t>(v)]) out.interior_map.push_back(v);
  if (out.interior_map.empty()) throw std::domain_error("Dirichlet restriction leaves no interior vertex");
  out.stiffness = restrict_matrix(op.stiffness, out.interior_map);
  out.mass = restrict_vector(op.mass, out.interior_map);
  return out;
}

Eigen::VectorXd energy_density(const ImmersedMesh& mesh, const Eigen::MatrixXd& components) {
  if (components.rows() != mesh.vertex_count()) throw std::invalid_argument("eigenmap has wrong vertex count");
  Eigen::VectorXd density(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const int i0 = mesh.triangles(t, 0), i1 = mesh.triangles(t, 1), i2 = mesh.triangles(t, 2);
    const Eigen::VectorXd e1 = (mesh.vertices.row(i1) - mesh.vertices.row(i0)).transpose();
    const Eigen::VectorXd e2 = (mesh.vertices.row(i2) - mesh.vertices.row(i0)).transpose();
    Eigen::Matrix2d gram;
    gram << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
    const Eigen::Matrix2d inv = gram.inverse();
    double sum = 0;
    for (Eigen::Index a = 0; a < components.cols(); ++a) {
      const Eigen::Vector2d df(components(i1, a) - components(i0, a), components(i2, a) - components(i0, a));
      sum += df.dot(inv * df);
    }
    density[t] = sum;
  }
  return density;
}

EigenmapValidation validate_eigenmap(const ImmersedMesh& mesh, const EigenmapData& map, double norm_tol,
                                     double energy_tol) {
  if (map.components.cols() < 2) throw std::invalid_argument("an eigenmap needs at least two components");
  EigenmapValidation out;
  out.max_norm_deviation = (map.components.rowwise().squaredNorm().array() - 1.0).abs().maxCoeff();
  out.max_energy_deviation = (energy_density(mesh, map.components).array() - map.lambda_map).abs().maxCoeff();
  out.passed = out.max_norm_deviation <= norm_tol && out.max_energy_deviation <= energy_tol;
  return out;
}

}  // namespace specineq
