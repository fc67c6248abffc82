#include "specineq/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

namespace specineq {

namespace {

constexpr double kPi = std::numbers::pi;

double triangle_area(const Vertices& v, int a, int b, int c) {
  const Eigen::VectorXd e1 = (v.row(b) - v.row(a)).transpose();
  const Eigen::VectorXd e2 = (v.row(c) - v.row(a)).transpose();
  const double g = e1.squaredNorm() * e2.squaredNorm() - std::pow(e1.dot(e2), 2);
  return 0.5 * std::sqrt(std::max(0.0, g));
}

std::string tri_name(int t, const Triangles& tris) {
  std::ostringstream os;
  os << "triangle " << t << " (" << tris(t, 0) << ", " << tris(t, 1) << ", " << tris(t, 2) << ")";
  return os.str();
}

}  // namespace

std::vector<int> detect_boundary(const Triangles& triangles, int vertex_count) {
  std::map<std::pair<int, int>, int> edge_count;
  for (int t = 0; t < triangles.rows(); ++t) {
    for (int e = 0; e < 3; ++e) {
      int a = triangles(t, e), b = triangles(t, (e + 1) % 3);
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  std::vector<char> on_boundary(static_cast<std::size_t>(vertex_count), 0);
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) {
      on_boundary[static_cast<std::size_t>(edge.first)] = 1;
      on_boundary[static_cast<std::size_t>(edge.second)] = 1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < vertex_count; ++v)
    if (on_boundary[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

void validate(const ImmersedMesh& mesh) {
  const int nv = mesh.vertex_count();
  if (nv == 0 || mesh.triangle_count() == 0) throw MeshError("mesh has no vertices or no triangles");
  if (mesh.ambient_dim() < 2) throw MeshError("ambient dimension must be at least 2");
  if (!mesh.vertices.allFinite()) throw MeshError("vertex coordinates must be finite");

  std::vector<char> used(static_cast<std::size_t>(nv), 0);
  std::map<std::pair<int, int>, int> directed;
  std::map<std::pair<int, int>, int> undirected;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    std::array<int, 3> idx{mesh.triangles(t, 0), mesh.triangles(t, 1), mesh.triangles(t, 2)};
    for (int i : idx) {
      if (i < 0 || i >= nv) throw MeshError(tri_name(t, mesh.triangles) + " references a missing vertex");
      used[static_cast<std::size_t>(i)] = 1;
    }
    if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2])
      throw MeshError(tri_name(t, mesh.triangles) + " repeats a vertex");

    double longest = 0;
    for (int e = 0; e < 3; ++e)
      longest = std::max(longest, (mesh.vertices.row(idx[e]) - mesh.vertices.row(idx[(e + 1) % 3])).squaredNorm());
    if (!(triangle_area(mesh.vertices, idx[0], idx[1], idx[2]) > 1e-12 * longest))
      throw MeshError(tri_name(t, mesh.triangles) + " is degenerate (zero area)");

    for (int e = 0; e < 3; ++e) {
      const int a = idx[e], b = idx[(e + 1) % 3];
      if (++directed[{a, b}] > 1)
        throw MeshError(tri_name(t, mesh.triangles) + " is inconsistently oriented with a neighbour");
      if (++undirected[{std::min(a, b), std::max(a, b)}] > 2)
        throw MeshError(tri_name(t, mesh.triangles) + " shares an edge with more than one other triangle");
    }
  }
  for (int v = 0; v < nv; ++v)
    if (!used[static_cast<std::size_t>(v)]) throw MeshError("vertex " + std::to_string(v) + " is not used by any triangle");

  if (mesh.boundary_vertices != detect_boundary(mesh.triangles, nv))
    throw MeshError("boundary vertex list does not match edge incidence");
}

ImmersedMesh make_mesh(Vertices vertices, Triangles triangles) {
  ImmersedMesh mesh{std::move(vertices), std::move(triangles), {}};
  mesh.boundary_vertices = detect_boundary(mesh.triangles, mesh.vertex_count());
  validate(mesh);
  return mesh;
}

ImmersedMesh make_icosphere(int subdivisions, double radius) {
  if (subdivisions < 0) throw std::domain_error("icosphere subdivisions must be >= 0");
  if (!(radius > 0)) throw std::domain_error("icosphere radius must be positive");

  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> pts = {{-1, p, 0}, {1, p, 0},  {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                                      {0, -1, -p}, {0, 1, -p}, {p, 0, -1},  {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
  for (auto& q : pts) q.normalize();
  std::vector<std::array<int, 3>> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      pts.push_back((pts[static_cast<std::size_t>(a)] + pts[static_cast<std::size_t>(b)]).normalized());
      const int id = static_cast<int>(pts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  Vertices v(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = radius * pts[i].transpose();
  Triangles t(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i)
    t.row(static_cast<Eigen::Index>(i)) << faces[i][0], faces[i][1], faces[i][2];
  return make_mesh(std::move(v), std::move(t));
}

ImmersedMesh make_ellipsoid(double a, double b, double c, int subdivisions) {
  if (!(a > 0 && b > 0 && c > 0)) throw std::domain_error("ellipsoid semi-axes must be positive");
  ImmersedMesh mesh = make_icosphere(subdivisions, 1.0);
  mesh.vertices.col(0) *= a;
  mesh.vertices.col(1) *= b;
  mesh.vertices.col(2) *= c;
  validate(mesh);
  return mesh;
}

namespace {

// Periodic resolution x resolution grid; `embed` maps (u, v) in [0, 2pi)^2 to R^m.
template <class Embed>
ImmersedMesh periodic_grid(int resolution, int ambient, Embed embed) {
  const int n = resolution;
  Vertices v(n * n, ambient);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v.row(i * n + j) = embed(2 * kPi * i / n, 2 * kPi * j / n).transpose();
  Triangles t(2 * n * n, 3);
  auto id = [n](int i, int j) { return ((i + n) % n) * n + (j + n) % n; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      t.row(2 * (i * n + j)) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
      t.row(2 * (i * n + j) + 1) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
    }
  }
  return make_mesh(std::move(v), std::move(t));
}

}  // namespace

ImmersedMesh make_clifford_torus(int resolution) {
  if (resolution < 3) throw std::domain_error("torus resolution must be >= 3");
  const double r = 1.0 / std::sqrt(2.0);
  return periodic_grid(resolution, 4, [r](double u, double v) {
    Eigen::Vector4d x(r * std::cos(u), r * std::sin(u), r * std::cos(v), r * std::sin(v));
    return x;
  });
}

ImmersedMesh make_flat_torus(double lx, double ly, int resolution) {
  if (resolution < 3) throw std::domain_error("torus resolution must be >= 3");
  if (!(lx > 0 && ly > 0)) throw std::domain_error("torus side lengths must be positive");
  const double rx = lx / (2 * kPi), ry = ly / (2 * kPi);
  return periodic_grid(resolution, 4, [rx, ry](double u, double v) {
    Eigen::Vector4d x(rx * std::cos(u), rx * std::sin(u), ry * std::cos(v), ry * std::sin(v));
    return x;
  });
}

namespace {

// Concentric rings: centre, then ring j in 1..rings with 6j vertices at radial parameter j/rings.
// `place(s, theta)` maps the parameter s in [0, 1] and angle theta to R^m.
template <class Place>
ImmersedMesh ring_mesh(int rings, int ambient, Place place) {
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> ring_start;
  pts.push_back(place(0.0, 0.0));
  for (int j = 1; j <= rings; ++j) {
    ring_start.push_back(static_cast<int>(pts.size()));
    for (int a = 0; a < 6 * j; ++a) pts.push_back(place(static_cast<double>(j) / rings, 2 * kPi * a / (6 * j)));
  }

  std::vector<std::array<int, 3>> faces;
  for (int a = 0; a < 6; ++a) faces.push_back({0, ring_start[0] + a, ring_start[0] + (a + 1) % 6});
  for (int j = 2; j <= rings; ++j) {
    const int n_in = 6 * (j - 1), n_out = 6 * j;
    const int s_in = ring_start[static_cast<std::size_t>(j - 2)], s_out = ring_start[static_cast<std::size_t>(j - 1)];
    int a = 0, b = 0;
    while (a < n_in || b < n_out) {
      const double next_in = static_cast<double>(a + 1) / n_in;
      const double next_out = static_cast<double>(b + 1) / n_out;
      const int in = s_in + a % n_in, out = s_out + b % n_out;
      if (b >= n_out || (a < n_in && next_in < next_out)) {
        faces.push_back({in, out, s_in + (a + 1) % n_in});
        ++a;
      } else {
        faces.push_back({in, out, s_out + (b + 1) % n_out});
        ++b;
      }
    }
  }

  Vertices v(static_cast<Eigen::Index>(pts.size()), ambient);
  for (std::size_t i = 0; i < pts.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  Triangles t(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i)
    t.row(static_cast<Eigen::Index>(i)) << faces[i][0], faces[i][1], faces[i][2];
  return make_mesh(std::move(v), std::move(t));
}

}  // namespace

ImmersedMesh make_disk(int resolution, double radius) {
  if (resolution < 2) throw std::domain_error("disk resolution must be >= 2");
  if (!(radius > 0)) throw std::domain_error("disk radius must be positive");
  return ring_mesh(resolution, 2, [radius](double s, double theta) {
    Eigen::VectorXd x(2);
    x << radius * s * std::cos(theta), radius * s * std::sin(theta);
    return x;
  });
}

ImmersedMesh make_spherical_cap(double angle, int resolution) {
  if (resolution < 2) throw std::domain_error("cap resolution must be >= 2");
  if (!(angle > 0 && angle < kPi)) throw std::domain_error("cap angle must lie in (0, pi)");
  return ring_mesh(resolution, 3, [angle](double s, double theta) {
    const double phi = angle * s;
    Eigen::VectorXd x(3);
    x << std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi);
    return x;
  });
}

ImmersedMesh make_planar_patch(int resolution) {
  if (resolution < 2) throw std::domain_error("patch resolution must be >= 2");
  const int n = resolution + 1;
  Vertices v(n * n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v.row(i * n + j) << static_cast<double>(i) / resolution, static_cast<double>(j) / resolution, 0.0;
  Triangles t(2 * resolution * resolution, 3);
  int row = 0;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const int a = i * n + j, b = (i + 1) * n + j, c = (i + 1) * n + j + 1, d = i * n + j + 1;
      t.row(row++) << a, b, c;
      t.row(row++) << a, c, d;
    }
  }
  return make_mesh(std::move(v), std::move(t));
}

ImmersedMesh read_mesh(std::istream& in) {
  std::stringstream clean;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    clean << line << '\n';
  }

  long nv = 0, nt = 0, m = 0;
  if (!(clean >> nv >> nt >> m)) throw MeshError("mesh header must read '<vertices> <triangles> <ambient dim>'");
  if (nv <= 0 || nt <= 0 || m < 2) throw MeshError("mesh header has non-positive counts or ambient dimension < 2");

  Vertices v(nv, m);
  for (long i = 0; i < nv; ++i)
    for (long a = 0; a < m; ++a)
      if (!(clean >> v(i, a))) throw MeshError("truncated vertex block at vertex " + std::to_string(i));
  Triangles t(nt, 3);
  for (long i = 0; i < nt; ++i)
    for (int a = 0; a < 3; ++a)
      if (!(clean >> t(i, a))) throw MeshError("truncated triangle block at triangle " + std::to_string(i));

  ImmersedMesh mesh{std::move(v), std::move(t), {}};
  std::string keyword;
  if (clean >> keyword) {
    if (keyword != "boundary") throw MeshError("unexpected token '" + keyword + "' after triangle block");
    long nb = 0;
    if (!(clean >> nb) || nb < 0) throw MeshError("boundary section needs a vertex count");
    for (long i = 0; i < nb; ++i) {
      int b = 0;
      if (!(clean >> b)) throw MeshError("truncated boundary list");
      mesh.boundary_vertices.push_back(b);
    }
    std::sort(mesh.boundary_vertices.begin(), mesh.boundary_vertices.end());
    mesh.boundary_vertices.erase(std::unique(mesh.boundary_vertices.begin(), mesh.boundary_vertices.end()),
                                 mesh.boundary_vertices.end());
  } else {
    mesh.boundary_vertices = detect_boundary(mesh.triangles, mesh.vertex_count());
  }
  validate(mesh);
  return mesh;
}

ImmersedMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const ImmersedMesh& mesh) {
  out << mesh.vertex_count() << ' ' << mesh.triangle_count() << ' ' << mesh.ambient_dim() << '\n';
  out.precision(17);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    for (int a = 0; a < mesh.ambient_dim(); ++a) out << (a ? " " : "") << mesh.vertices(i, a);
    out << '\n';
  }
  for (int i = 0; i < mesh.triangle_count(); ++i)
    out << mesh.triangles(i, 0) << ' ' << mesh.triangles(i, 1) << ' ' << mesh.triangles(i, 2) << '\n';
  if (!mesh.boundary_vertices.empty()) {
    out << "boundary " << mesh.boundary_vertices.size() << '\n';
    for (std::size_t i = 0; i < mesh.boundary_vertices.size(); ++i)
      out << (i ? " " : "") << mesh.boundary_vertices[i];
    out << '\n';
  }
}

}  // namespace specineq
