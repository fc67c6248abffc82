#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace specineq {

using Vertices = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Triangles = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangle mesh immersed in R^m (one vertex per row). Intrinsic dimension is 2.
struct ImmersedMesh {
  Vertices vertices;
  Triangles triangles;
  std::vector<int> boundary_vertices;  ///< sorted, unique

  int vertex_count() const { return static_cast<int>(vertices.rows()); }
  int triangle_count() const { return static_cast<int>(triangles.rows()); }
  int ambient_dim() const { return static_cast<int>(vertices.cols()); }
  bool closed() const { return boundary_vertices.empty(); }
};

/// Vertices lying on edges with a single incident triangle.
std::vector<int> detect_boundary(const Triangles& triangles, int vertex_count);

/// Checks indices, positive triangle areas, edge-manifold connectivity, consistent
/// orientation and the boundary set. Throws MeshError naming the first offending element.
void validate(const ImmersedMesh& mesh);

/// Builds a mesh, fills boundary_vertices from connectivity and validates it.
ImmersedMesh make_mesh(Vertices vertices, Triangles triangles);

// Generators. All throw std::domain_error on a resolution that is too small.

ImmersedMesh make_icosphere(int subdivisions, double radius = 1.0);
ImmersedMesh make_ellipsoid(double a, double b, double c, int subdivisions);
/// (cos u, sin u, cos v, sin v)/sqrt(2) on the unit sphere of R^4; resolution^2 vertices.
ImmersedMesh make_clifford_torus(int resolution);
/// Lx x Ly flat torus in R^4 as a product of circles of radii Lx/2pi and Ly/2pi.
ImmersedMesh make_flat_torus(double lx, double ly, int resolution);
/// Unit disk in R^2, `resolution` rings; boundary on the outer ring.
ImmersedMesh make_disk(int resolution, double radius = 1.0);
/// Geodesic cap {polar angle <= angle} of the unit sphere.
ImmersedMesh make_spherical_cap(double angle, int resolution);
/// Flat [0,1]^2 patch in R^3 (z = 0), resolution x resolution cells.
ImmersedMesh make_planar_patch(int resolution);

// ASCII format:
//   <vertex count> <triangle count> <ambient dimension m>
//   m coordinates per vertex row
//   3 zero-based indices per triangle row
//   optional: "boundary <count>" followed by that many indices
// Lines starting with '#' are comments.
ImmersedMesh read_mesh(std::istream& in);
ImmersedMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const ImmersedMesh& mesh);

}  // namespace specineq
