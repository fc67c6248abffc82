#include "specineq/scenario.hpp"

#include "specineq/exact_spectra.hpp"
#include "specineq/heisenberg.hpp"
#include "specineq/laplacian.hpp"
#include "specineq/mesh.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace specineq {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* const kMeshKinds[] = {"icosphere", "ellipsoid", "clifford-torus", "flat-torus",
                                  "disk", "spherical-cap", "planar-patch", "mesh-file"};

[[noreturn]] void field_error(const std::string& path, const std::string& message) {
  throw ConfigError("field '" + (path.empty() ? std::string("<root>") : path) + "': " + message);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) field_error(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      field_error(join(path, it.key()), "unknown key");
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string get_string(const json& obj, const std::string& path, const char* key, std::string fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) field_error(join(path, key), "expected a string");
  return v->get<std::string>();
}

long get_int(const json& obj, const std::string& path, const char* key, long fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) field_error(join(path, key), "expected an integer");
  return v->get<long>();
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) field_error(join(path, key), "expected a number");
  return v->get<double>();
}

std::vector<double> get_numbers(const json& obj, const std::string& path, const char* key) {
  const json* v = find(obj, key);
  if (!v) return {};
  if (!v->is_array()) field_error(join(path, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number()) field_error(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back((*v)[i].get<double>());
  }
  return out;
}

std::string rational_text(const json& v, const std::string& path) {
  std::string text;
  if (v.is_string()) text = v.get<std::string>();
  else if (v.is_number()) text = v.dump();
  else field_error(path, "expected a rational (\"p/q\", integer or decimal)");
  try {
    return parse_rational(text).get_str();
  } catch (const std::exception& e) {
    field_error(path, e.what());
  }
}

std::vector<std::string> get_rationals(const json& obj, const std::string& path, const char* key) {
  const json* v = find(obj, key);
  if (!v) return {};
  if (!v->is_array()) field_error(join(path, key), "expected an array of rationals");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v->size(); ++i)
    out.push_back(rational_text((*v)[i], join(path, key) + "[" + std::to_string(i) + "]"));
  return out;
}

GeometrySpec parse_geometry(const json& obj, const std::string& path) {
  allow_keys(obj, path, {"kind", "label", "n", "resolution", "radius", "axes", "periods", "lengths", "angle", "lower",
                         "upper", "path"});
  GeometrySpec g;
  if (!find(obj, "kind")) field_error(join(path, "kind"), "missing");
  g.kind = get_string(obj, path, "kind", "");
  g.label = get_string(obj, path, "label", "");
  g.n = static_cast<int>(get_int(obj, path, "n", g.kind == "heisenberg-box" ? 1 : 2));
  g.resolution = static_cast<int>(get_int(obj, path, "resolution", 0));
  g.radius = get_number(obj, path, "radius", 1.0);
  g.axes = get_numbers(obj, path, "axes");
  g.periods = get_rationals(obj, path, "periods");
  g.lengths = get_numbers(obj, path, "lengths");
  g.angle = get_number(obj, path, "angle", 0.0);
  g.lower = get_number(obj, path, "lower", 0.0);
  g.upper = get_number(obj, path, "upper", 1.0);
  g.path = get_string(obj, path, "path", "");
  return g;
}

json geometry_json(const GeometrySpec& g) {
  json out = {{"kind", g.kind}, {"label", g.label}};
  if (g.kind == "model-sphere") out["n"] = g.n;
  if (g.kind == "model-torus") out["periods"] = g.periods;
  if (g.kind == "icosphere" || g.kind == "disk") out["radius"] = g.radius;
  if (g.kind == "ellipsoid") out["axes"] = g.axes;
  if (g.kind == "flat-torus") out["lengths"] = g.lengths;
  if (g.kind == "spherical-cap") out["angle"] = g.angle;
  if (g.kind == "mesh-file") out["path"] = g.path;
  if (g.kind == "heisenberg-box") {
    out["n"] = g.n;
    out["lower"] = g.lower;
    out["upper"] = g.upper;
  }
  if (g.is_mesh() && g.kind != "mesh-file") out["resolution"] = g.resolution;
  if (g.is_heisenberg()) out["resolution"] = g.resolution;
  return out;
}

std::string default_label(const GeometrySpec& g) {
  if (!g.label.empty()) return g.label;
  if (g.kind == "model-sphere") return "S^" + std::to_string(g.n);
  if (g.kind == "model-torus") return "T^" + std::to_string(g.periods.size());
  if (g.kind == "heisenberg-box") return "H^" + std::to_string(g.n);
  return g.kind;
}

bool has(const Scenario& s, Theorem t) { return std::find(s.theorems.begin(), s.theorems.end(), t) != s.theorems.end(); }

bool is_kohn(Theorem t) { return t == Theorem::Kohn || t == Theorem::KohnBound || t == Theorem::KohnSimpleBound; }
bool is_eigenmap(Theorem t) { return t == Theorem::Eigenmap || t == Theorem::EigenmapBound; }

void check_geometry(const GeometrySpec& g, const std::string& path, std::size_t k_max) {
  auto need = [&](bool ok, const char* key, const std::string& msg) {
    if (!ok) field_error(join(path, key), msg);
  };
  const bool known = g.is_model() || g.is_mesh() || g.is_heisenberg();
  need(known, "kind", "unknown geometry kind '" + g.kind + "'");
  need(g.label.find(',') == std::string::npos, "label", "must not contain a comma");
  if (g.kind == "model-sphere") need(g.n >= 1, "n", "sphere dimension must be >= 1");
  if (g.kind == "model-torus") {
    need(!g.periods.empty(), "periods", "need at least one period");
    for (const auto& p : g.periods) need(parse_rational(p) > 0, "periods", "periods must be positive");
  }
  if (g.kind == "icosphere") {
    need(g.resolution >= 0 && g.resolution <= 7, "resolution", "icosphere subdivisions must be in [0, 7]");
    need(g.radius > 0, "radius", "must be positive");
  }
  if (g.kind == "ellipsoid") {
    need(g.axes.size() == 3, "axes", "need three semi-axes");
    for (double a : g.axes) need(a > 0, "axes", "semi-axes must be positive");
    need(g.resolution >= 0 && g.resolution <= 7, "resolution", "subdivisions must be in [0, 7]");
  }
  if (g.kind == "flat-torus") {
    need(g.lengths.size() == 2, "lengths", "need two side lengths");
    for (double a : g.lengths) need(a > 0, "lengths", "side lengths must be positive");
  }
  if (g.kind == "clifford-torus" || g.kind == "flat-torus") need(g.resolution >= 3, "resolution", "must be >= 3");
  if (g.kind == "disk" || g.kind == "spherical-cap" || g.kind == "planar-patch")
    need(g.resolution >= 2, "resolution", "must be >= 2");
  if (g.kind == "disk") need(g.radius > 0, "radius", "must be positive");
  if (g.kind == "spherical-cap") need(g.angle > 0 && g.angle < std::numbers::pi, "angle", "must be in (0, pi)");
  if (g.kind == "mesh-file") need(!g.path.empty(), "path", "missing");
  if (g.is_heisenberg()) {
    need(g.n >= 1, "n", "must be >= 1");
    need(g.upper > g.lower, "upper", "must exceed lower");
    need(g.resolution >= 2 && g.resolution % 2 == 0, "resolution",
         "must be an even count >= 2 (odd counts leave a zero mode in the centred-difference operator)");
    double nodes = std::pow(static_cast<double>(g.resolution), 2 * g.n + 1);
    need(nodes >= static_cast<double>(k_max + 1), "resolution",
         "grid has fewer interior nodes than the " + std::to_string(k_max + 1) + " eigenvalues requested");
  }
}

// ---------------------------------------------------------------------------------------------

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

template <class F>
auto timed(RunResult& result, const std::string& scenario, const std::string& stage, const std::string& label, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto record = [&] {
    result.timings.push_back(
        {stage, label, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record();
    } else {
      auto value = f();
      record();
      return value;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, scenario, (label.empty() ? std::string() : label + ": ") + e.what());
  }
}

struct PotentialCase {
  std::string suffix;  // appended to the geometry label
  Rational value;
};

std::vector<PotentialCase> potential_cases(const PotentialSpec& p) {
  if (p.kind == "zero" || p.kind == "tabulated") return {{"", Rational(0)}};
  const std::string key = p.kind == "constant" ? ";c=" : ";g=";
  std::vector<PotentialCase> out;
  for (const auto& v : p.values) out.push_back({key + v, parse_rational(v)});
  return out;
}

std::size_t first_k(Theorem t, std::size_t k_min) { return t == Theorem::ReillyChain ? std::max<std::size_t>(2, k_min) : k_min; }

template <class Scalar>
void add_reports(const Scenario& s, const ReportInputs<Scalar>& inputs, double tolerance,
                 std::vector<InequalityReport>& out) {
  for (Theorem t : s.theorems) {
    if (t == Theorem::YangSaturation) continue;
    out.push_back(build_report(t, inputs, first_k(t, s.k_min), s.k_max, tolerance));
  }
}

void run_model_sphere(const Scenario& s, const GeometrySpec& g, RunResult& result) {
  const std::string label = default_label(g);
  const int n = g.n;
  const Rational n2(n * n);
  const auto base = timed(result, s.name, "spectrum", label,
                          [&] { return ModelSpectrum(Sphere{n}).prefix(s.k_max + 1); });
  timed(result, s.name, "inequalities", label, [&] {
    for (const auto& c : potential_cases(s.potential)) {
      // q is constant: c itself, or g |h|^2 = g n^2
      const Rational q = s.potential.kind == "geometric" ? c.value * n2 : c.value;
      if (has(s, Theorem::YangSaturation)) {
        const Rational g_eff = q / n2;
        auto rep = saturation_report(n, g_eff, s.saturation_levels);
        rep.label = label + c.suffix;
        result.reports.push_back(std::move(rep));
      }
      ReportInputs<Rational> in;
      in.label = label + c.suffix;
      in.source = "exact spectrum of S^" + std::to_string(n);
      in.sample.n = n;
      in.sample.ambient.kind = parse_ambient(s.ambient);
      for (const auto& l : base) in.sample.eigenvalues.push_back(l + q);
      const Rational d = n2 / 4 - q;
      in.sample.delta_terms = std::vector<Rational>(base.size(), d);
      in.sample.delta_sup = d;
      in.sample.q_integrals = std::vector<Rational>(base.size(), q);
      in.h_sup_sq = n2;
      in.mean_h_sq = n2;
      if (s.eigenmap) in.lambda_map = parse_rational(s.eigenmap->lambda);
      add_reports(s, in, 0.0, result.reports);
    }
  });
}

void validate_torus_eigenmap(const Scenario& s, const GeometrySpec& g, RunResult& result) {
  const std::string label = default_label(g);
  timed(result, s.name, "eigenmap-validation", label, [&] {
    if (g.periods.size() != 2) throw ConfigError("eigenmap validation is implemented for 2-dimensional tori");
    const double r1 = parse_rational(g.periods[0]).get_d(), r2 = parse_rational(g.periods[1]).get_d();
    const double two_pi = 2 * std::numbers::pi;
    const auto mesh = make_flat_torus(two_pi * r1, two_pi * r2, s.eigenmap->resolution);
    // phi = (x_1, x_2)/(r_1 sqrt 2), (x_3, x_4)/(r_2 sqrt 2): unit norm, energy (1/r_1^2 + 1/r_2^2)/2
    EigenmapData map;
    map.components = Eigen::MatrixXd(mesh.vertices);
    map.components.leftCols(2) /= r1 * std::numbers::sqrt2;
    map.components.rightCols(2) /= r2 * std::numbers::sqrt2;
    map.lambda_map = parse_rational(s.eigenmap->lambda).get_d();
    const auto check = validate_eigenmap(mesh, map, s.eigenmap->tolerance, s.eigenmap->tolerance);
    if (!check.passed)
      throw std::runtime_error("map is not an eigenmap with lambda = " + s.eigenmap->lambda +
                               " (norm deviation " + format_number(check.max_norm_deviation) +
                               ", energy deviation " + format_number(check.max_energy_deviation) + ")");
  });
}

void run_model_torus(const Scenario& s, const GeometrySpec& g, RunResult& result) {
  const std::string label = default_label(g);
  std::vector<Rational> periods;
  for (const auto& p : g.periods) periods.push_back(parse_rational(p));
  if (s.eigenmap && std::any_of(s.theorems.begin(), s.theorems.end(), is_eigenmap)) validate_torus_eigenmap(s, g, result);

  const auto base = timed(result, s.name, "spectrum", label,
                          [&] { return ModelSpectrum(FlatTorus{periods}).prefix(s.k_max + 1); });
  timed(result, s.name, "inequalities", label, [&] {
    // product of circles of radii periods[j]: |h|^2 = sum 1/r_j^2
    Rational h2(0);
    for (const auto& r : periods) h2 += 1 / (r * r);
    for (const auto& c : potential_cases(s.potential)) {
      const Rational q = s.potential.kind == "geometric" ? c.value * h2 : c.value;
      ReportInputs<Rational> in;
      in.label = label + c.suffix;
      in.source = "exact lattice spectrum of T^" + std::to_string(periods.size());
      in.sample.n = static_cast<int>(periods.size());
      in.sample.ambient.kind = parse_ambient(s.ambient);
      for (const auto& l : base) in.sample.eigenvalues.push_back(l + q);
      const Rational d = h2 / 4 - q;
      in.sample.delta_terms = std::vector<Rational>(base.size(), d);
      in.sample.delta_sup = d;
      in.sample.q_integrals = std::vector<Rational>(base.size(), q);
      in.h_sup_sq = h2;
      in.mean_h_sq = h2;
      if (s.eigenmap) in.lambda_map = parse_rational(s.eigenmap->lambda);
      add_reports(s, in, 0.0, result.reports);
    }
  });
}

ImmersedMesh build_mesh(const Scenario& s, const GeometrySpec& g) {
  if (g.kind == "icosphere") return make_icosphere(g.resolution, g.radius);
  if (g.kind == "ellipsoid") return make_ellipsoid(g.axes[0], g.axes[1], g.axes[2], g.resolution);
  if (g.kind == "clifford-torus") return make_clifford_torus(g.resolution);
  if (g.kind == "flat-torus") return make_flat_torus(g.lengths[0], g.lengths[1], g.resolution);
  if (g.kind == "disk") return make_disk(g.resolution, g.radius);
  if (g.kind == "spherical-cap") return make_spherical_cap(g.angle, g.resolution);
  if (g.kind == "planar-patch") return make_planar_patch(g.resolution);
  return read_mesh_file((s.base_dir / g.path).string());
}

Eigen::VectorXd read_table(const fs::path& path, Eigen::Index size) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential table " + path.string());
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    if (token.front() == '#') {
      std::getline(in, token);
      continue;
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ConfigError("potential table: bad value '" + token + "'");
    values.push_back(v);
  }
  if (static_cast<Eigen::Index>(values.size()) != size)
    throw ConfigError("potential table has " + std::to_string(values.size()) + " values, mesh has " +
                      std::to_string(size) + " vertices");
  return Eigen::Map<Eigen::VectorXd>(values.data(), size);
}

void run_mesh(const Scenario& s, const GeometrySpec& g, RunResult& result) {
  const std::string label = default_label(g);
  const auto mesh = timed(result, s.name, "geometry", label, [&] { return build_mesh(s, g); });
  struct Assembled {
    DiscreteOperator full, restricted;
    MeanCurvatureField curvature;
  };
  const auto ops = timed(result, s.name, "assembly", label, [&] {
    Assembled a;
    a.full = assemble_laplacian(mesh);
    a.curvature = mean_curvature(mesh, a.full);
    a.restricted = apply_dirichlet(mesh, a.full);
    if (has(s, Theorem::Reilly) && !mesh.boundary_vertices.empty())
      throw ConfigError("reilly needs a closed surface; the mesh has a boundary");
    return a;
  });
  const Eigen::VectorXd h2 = restrict_vector(ops.curvature.norm_sq, ops.restricted.interior_map);
  const auto count = s.k_max + 1;

  for (const auto& c : potential_cases(s.potential)) {
    const std::string case_label = label + c.suffix;
    const Eigen::VectorXd q_full = timed(result, s.name, "potential", case_label, [&]() -> Eigen::VectorXd {
      const double v = c.value.get_d();
      if (s.potential.kind == "geometric") return v * ops.curvature.norm_sq;
      if (s.potential.kind == "tabulated") return read_table(s.base_dir / s.potential.path, mesh.vertex_count());
      return Eigen::VectorXd::Constant(mesh.vertex_count(), v);
    });
    const Eigen::VectorXd q = restrict_vector(q_full, ops.restricted.interior_map);

    const auto sol = timed(result, s.name, "solve", case_label, [&] {
      if (static_cast<Eigen::Index>(count) > ops.restricted.mass.size())
        throw std::domain_error("k range needs " + std::to_string(count) + " eigenvalues, mesh has only " +
                                std::to_string(ops.restricted.mass.size()) + " unknowns");
      SolveConfig cfg = s.solver;
      cfg.count = count;
      return solve_smallest(assemble_schrodinger(ops.restricted, q), ops.restricted.mass, cfg);
    });

    timed(result, s.name, "inequalities", case_label, [&] {
      ReportInputs<double> in;
      in.label = case_label;
      in.source = g.kind + " mesh, " + std::to_string(mesh.vertex_count()) + " vertices";
      in.sample.n = 2;
      in.sample.ambient.kind = parse_ambient(s.ambient);
      in.sample.eigenvalues.assign(sol.values.data(), sol.values.data() + sol.values.size());
      in.sample.delta_terms = delta_integrals(sol.vectors, h2, q, ops.restricted.mass);
      // sup over the unknowns, i.e. over the support of every eigenfunction
      in.sample.delta_sup = (0.25 * h2 - q).maxCoeff();
      in.sample.q_integrals = potential_integrals(sol.vectors, q, ops.restricted.mass);
      in.h_sup_sq = ops.curvature.sup_sq;
      in.mean_h_sq = ops.curvature.mean_sq;
      if (s.eigenmap) in.lambda_map = parse_rational(s.eigenmap->lambda).get_d();
      add_reports(s, in, s.tolerance, result.reports);
    });
  }
}

void run_heisenberg(const Scenario& s, const GeometrySpec& g, RunResult& result) {
  const std::string label = default_label(g);
  const auto grid = timed(result, s.name, "geometry", label,
                          [&] { return make_box_grid(g.n, g.lower, g.upper, g.resolution); });
  const auto values = timed(result, s.name, "solve", label, [&] { return solve_kohn(grid, s.k_max + 1, s.solver); });
  timed(result, s.name, "inequalities", label, [&] {
    ReportInputs<double> in;
    in.label = label;
    in.source = "Kohn Laplacian, " + std::to_string(grid.node_count()) + " interior nodes";
    in.sample.n = g.n;
    in.sample.eigenvalues = values;
    add_reports(s, in, s.tolerance, result.reports);
  });
}

// ---------------------------------------------------------------------------------------------

struct Builtin {
  const char* name;
  const char* description;
  const char* config;
};

const Builtin kBuiltins[] = {
    {"sphere-exact", "exact spectra of S^2..S^6: Yang, bounds, immersibility, Reilly",
     R"({"name": "sphere-exact",
         "geometry": [{"kind": "model-sphere", "n": 2}, {"kind": "model-sphere", "n": 3},
                      {"kind": "model-sphere", "n": 4}, {"kind": "model-sphere", "n": 5},
                      {"kind": "model-sphere", "n": 6}],
         "theorems": ["yang", "yang-bounds", "simple-bound", "immersibility", "reilly", "reilly-chain"],
         "k_max": 9, "tolerance": 0})"},
    {"sphere-saturation", "exact Yang identity on S^n at every gap index, q = g n^2",
     R"({"name": "sphere-saturation",
         "geometry": [{"kind": "model-sphere", "n": 1}, {"kind": "model-sphere", "n": 2},
                      {"kind": "model-sphere", "n": 3}, {"kind": "model-sphere", "n": 4},
                      {"kind": "model-sphere", "n": 5}, {"kind": "model-sphere", "n": 6}],
         "potential": {"kind": "geometric", "values": ["0", "1/4", "-3", "17/5"]},
         "theorems": ["yang-saturation"], "saturation_levels": 8, "k_max": 4, "tolerance": 0})"},
    {"icosphere-yang", "icosphere mesh of S^2, q = 0, k <= 20",
     R"({"name": "icosphere-yang",
         "geometry": {"kind": "icosphere", "resolution": 4},
         "theorems": ["yang", "yang-bounds", "simple-bound"], "k_max": 20})"},
    {"icosphere-geometric-potential", "icosphere mesh, q = g|h|^2 for g in {0, 1/4, 1}",
     R"({"name": "icosphere-geometric-potential",
         "geometry": {"kind": "icosphere", "resolution": 4},
         "potential": {"kind": "geometric", "values": ["0", "1/4", "1"]},
         "theorems": ["yang", "yang-bounds", "simple-bound"], "k_max": 20})"},
    {"ellipsoid-yang", "ellipsoid (1, 1, 1.5), q = g|h|^2 for g in {0, 1/4, 1}",
     R"({"name": "ellipsoid-yang",
         "geometry": {"kind": "ellipsoid", "axes": [1, 1, 1.5], "resolution": 4},
         "potential": {"kind": "geometric", "values": ["0", "1/4", "1"]},
         "theorems": ["yang", "yang-bounds", "simple-bound"], "k_max": 20})"},
    {"clifford-torus-reilly", "Clifford torus in S^3 in R^4: Reilly equality, Yang, Reilly chain",
     R"({"name": "clifford-torus-reilly",
         "geometry": {"kind": "clifford-torus", "resolution": 64},
         "theorems": ["reilly", "yang", "yang-bounds", "reilly-chain"], "k_max": 20})"},
    {"flat-torus-eigenmap", "exact lattice spectrum of the 2pi x 2pi torus with the eigenmap into S^3",
     R"({"name": "flat-torus-eigenmap",
         "geometry": {"kind": "model-torus", "periods": ["1", "1"]},
         "eigenmap": {"lambda": "1", "resolution": 64, "tolerance": 0.01},
         "theorems": ["eigenmap", "eigenmap-bound"], "k_max": 20, "tolerance": 0})"},
    {"disk-dirichlet", "Dirichlet problems on a planar disk and a spherical cap",
     R"({"name": "disk-dirichlet",
         "geometry": [{"kind": "disk", "resolution": 16},
                      {"kind": "spherical-cap", "angle": 1.0, "resolution": 16}],
         "theorems": ["yang", "yang-bounds", "simple-bound"], "k_max": 20})"},
    {"heisenberg-box", "Kohn Laplacian on [0,1]^3 in H^1 with Dirichlet conditions",
     R"({"name": "heisenberg-box",
         "geometry": {"kind": "heisenberg-box", "n": 1, "lower": 0, "upper": 1, "resolution": 32},
         "theorems": ["kohn", "kohn-bound", "kohn-simple-bound"], "k_max": 10})"},
    {"immersibility-audit", "lower bounds for sup |h|^2 from mesh spectra",
     R"({"name": "immersibility-audit",
         "geometry": [{"kind": "icosphere", "resolution": 4},
                      {"kind": "ellipsoid", "axes": [1, 1, 1.5], "resolution": 4},
                      {"kind": "clifford-torus", "resolution": 48}],
         "theorems": ["immersibility"], "k_max": 20})"},
    {"reilly-chain", "iterated Reilly bound on the icosphere, k = 2..10",
     R"({"name": "reilly-chain",
         "geometry": {"kind": "icosphere", "resolution": 4},
         "theorems": ["reilly-chain"], "k_min": 2, "k_max": 10})"},
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace

bool GeometrySpec::is_mesh() const {
  return std::any_of(std::begin(kMeshKinds), std::end(kMeshKinds), [&](const char* k) { return kind == k; });
}

Scenario parse_scenario(const json& doc, const fs::path& base_dir) {
  allow_keys(doc, "", {"name", "description", "geometry", "potential", "theorems", "k_min", "k_max", "tolerance",
                       "ambient", "saturation_levels", "eigenmap", "solver", "output"});
  Scenario s;
  s.base_dir = base_dir;
  if (!find(doc, "name")) field_error("name", "missing");
  s.name = get_string(doc, "", "name", "");
  if (s.name.empty() || !std::all_of(s.name.begin(), s.name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
      }) || s.name.front() == '.')
    field_error("name", "use letters, digits, '-', '_' or '.'");
  s.description = get_string(doc, "", "description", "");

  const json* geo = find(doc, "geometry");
  if (!geo) field_error("geometry", "missing");
  if (geo->is_array()) {
    for (std::size_t i = 0; i < geo->size(); ++i)
      s.geometries.push_back(parse_geometry((*geo)[i], "geometry[" + std::to_string(i) + "]"));
  } else {
    s.geometries.push_back(parse_geometry(*geo, "geometry"));
  }

  if (const json* pot = find(doc, "potential")) {
    allow_keys(*pot, "potential", {"kind", "values", "path"});
    s.potential.kind = get_string(*pot, "potential", "kind", "zero");
    s.potential.values = get_rationals(*pot, "potential", "values");
    s.potential.path = get_string(*pot, "potential", "path", "");
  }

  const json* th = find(doc, "theorems");
  if (!th) field_error("theorems", "missing");
  if (!th->is_array()) field_error("theorems", "expected an array of theorem names");
  for (std::size_t i = 0; i < th->size(); ++i) {
    const std::string path = "theorems[" + std::to_string(i) + "]";
    if (!(*th)[i].is_string()) field_error(path, "expected a theorem name");
    try {
      s.theorems.push_back(parse_theorem((*th)[i].get<std::string>()));
    } catch (const ConfigError& e) {
      field_error(path, e.what());
    }
  }

  const long k_min = get_int(doc, "", "k_min", 1);
  const long k_max = get_int(doc, "", "k_max", 10);
  if (k_min < 1) field_error("k_min", "must be >= 1");
  if (k_max < k_min) field_error("k_max", "must be >= k_min");
  s.k_min = static_cast<std::size_t>(k_min);
  s.k_max = static_cast<std::size_t>(k_max);
  s.tolerance = get_number(doc, "", "tolerance", 1e-3);
  s.ambient = get_string(doc, "", "ambient", "euclidean");
  s.saturation_levels = static_cast<int>(get_int(doc, "", "saturation_levels", 8));

  if (const json* em = find(doc, "eigenmap")) {
    allow_keys(*em, "eigenmap", {"lambda", "resolution", "tolerance"});
    EigenmapSpec e;
    if (const json* l = find(*em, "lambda")) e.lambda = rational_text(*l, "eigenmap.lambda");
    e.resolution = static_cast<int>(get_int(*em, "eigenmap", "resolution", e.resolution));
    e.tolerance = get_number(*em, "eigenmap", "tolerance", e.tolerance);
    s.eigenmap = e;
  }

  if (const json* sv = find(doc, "solver")) {
    allow_keys(*sv, "solver", {"tolerance", "max_iterations", "seed", "method"});
    s.solver.tolerance = get_number(*sv, "solver", "tolerance", s.solver.tolerance);
    s.solver.max_iterations = static_cast<int>(get_int(*sv, "solver", "max_iterations", s.solver.max_iterations));
    if (const json* seed = find(*sv, "seed")) {
      if (!seed->is_number_unsigned()) field_error("solver.seed", "expected a non-negative integer");
      s.solver.seed = seed->get<std::uint64_t>();
    }
    const std::string method = get_string(*sv, "solver", "method", "auto");
    if (method == "auto") s.solver.method = SolveMethod::Auto;
    else if (method == "dense") s.solver.method = SolveMethod::Dense;
    else if (method == "lobpcg") s.solver.method = SolveMethod::Lobpcg;
    else field_error("solver.method", "expected auto, dense or lobpcg");
  }

  if (const json* o = find(doc, "output")) {
    allow_keys(*o, "output", {"dir"});
    s.output_dir = get_string(*o, "output", "dir", s.output_dir);
  }

  check_scenario(s);
  return s;
}

void check_scenario(const Scenario& s) {
  if (s.theorems.empty()) field_error("theorems", "empty theorem list");
  if (s.geometries.empty()) field_error("geometry", "no geometry given");
  if (s.k_min < 1) field_error("k_min", "must be >= 1");
  if (s.k_max < s.k_min) field_error("k_max", "must be >= k_min");
  if (!(s.tolerance >= 0) || !std::isfinite(s.tolerance)) field_error("tolerance", "must be finite and >= 0");
  try {
    parse_ambient(s.ambient);
  } catch (const std::exception& e) {
    field_error("ambient", e.what());
  }
  if (s.saturation_levels < 1) field_error("saturation_levels", "must be >= 1");
  if (!(s.solver.tolerance > 0)) field_error("solver.tolerance", "must be positive");
  if (s.solver.max_iterations < 1) field_error("solver.max_iterations", "must be >= 1");
  if (s.output_dir.empty()) field_error("output.dir", "must not be empty");

  const auto& p = s.potential;
  if (p.kind == "zero") {
    if (!p.values.empty()) field_error("potential.values", "zero potential takes no values");
  } else if (p.kind == "constant" || p.kind == "geometric") {
    if (p.values.empty()) field_error("potential.values", "need at least one value");
  } else if (p.kind == "tabulated") {
    if (p.path.empty()) field_error("potential.path", "tabulated potential needs a file");
  } else {
    field_error("potential.kind", "expected zero, constant, geometric or tabulated");
  }
  const bool zero_potential =
      p.kind == "zero" || (p.kind != "tabulated" && std::all_of(p.values.begin(), p.values.end(),
                                                                [](const std::string& v) { return v == "0"; }));

  for (std::size_t i = 0; i < s.geometries.size(); ++i) {
    const auto& g = s.geometries[i];
    const std::string path = s.geometries.size() == 1 ? "geometry" : "geometry[" + std::to_string(i) + "]";
    check_geometry(g, path, s.k_max);
    if (g.is_heisenberg() && p.kind != "zero") field_error("potential", "the Kohn Laplacian takes no potential");
    if (p.kind == "tabulated" && !g.is_mesh()) field_error("potential", "tabulated potentials need a mesh geometry");
    for (Theorem t : s.theorems) {
      if (is_kohn(t) != g.is_heisenberg())
        field_error(path + ".kind", tag(t) + " does not apply to a " + g.kind + " geometry");
      if (t == Theorem::YangSaturation && g.kind != "model-sphere")
        field_error(path + ".kind", "yang-saturation needs a model-sphere geometry");
      if (is_eigenmap(t) && g.kind != "model-torus")
        field_error(path + ".kind", tag(t) + " is evaluated on model-torus geometries");
      if (is_eigenmap(t) && !s.eigenmap) field_error("eigenmap", tag(t) + " needs an eigenmap block");
      if (t == Theorem::Reilly && !zero_potential) field_error("potential", "reilly needs q = 0");
      if (t == Theorem::Reilly && (g.kind == "disk" || g.kind == "spherical-cap" || g.kind == "planar-patch"))
        field_error(path + ".kind", "reilly needs a closed geometry");
    }
  }
  if (s.eigenmap) {
    if (s.eigenmap->resolution < 3) field_error("eigenmap.resolution", "must be >= 3");
    if (!(s.eigenmap->tolerance > 0)) field_error("eigenmap.tolerance", "must be positive");
    if (!(parse_rational(s.eigenmap->lambda) > 0)) field_error("eigenmap.lambda", "must be positive");
  }
  std::map<std::string, int> labels;
  for (const auto& g : s.geometries)
    if (++labels[default_label(g)] > 1) field_error("geometry", "duplicate label '" + default_label(g) + "'; set label");
}

Scenario load_scenario_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    // e.what() carries "line L, column C"
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(doc, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json to_json(const Scenario& s) {
  json geos = json::array();
  for (const auto& g : s.geometries) {
    json gj = geometry_json(g);
    gj["label"] = default_label(g);
    geos.push_back(std::move(gj));
  }
  json theorems = json::array();
  for (Theorem t : s.theorems) theorems.push_back(tag(t));
  json out = {
      {"name", s.name},
      {"description", s.description},
      {"geometry", std::move(geos)},
      {"potential", {{"kind", s.potential.kind}, {"values", s.potential.values}}},
      {"theorems", std::move(theorems)},
      {"k_min", s.k_min},
      {"k_max", s.k_max},
      {"tolerance", s.tolerance},
      {"ambient", s.ambient},
      {"saturation_levels", s.saturation_levels},
      {"solver",
       {{"tolerance", s.solver.tolerance},
        {"max_iterations", s.solver.max_iterations},
        {"seed", s.solver.seed},
        {"method", s.solver.method == SolveMethod::Auto ? "auto" : s.solver.method == SolveMethod::Dense ? "dense" : "lobpcg"}}},
      {"output", {{"dir", s.output_dir}}},
  };
  if (s.potential.kind == "tabulated") out["potential"]["path"] = s.potential.path;
  if (s.eigenmap)
    out["eigenmap"] = {{"lambda", s.eigenmap->lambda},
                       {"resolution", s.eigenmap->resolution},
                       {"tolerance", s.eigenmap->tolerance}};
  return out;
}

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.k_max) s.k_max = *o.k_max;
  if (o.tolerance) s.tolerance = *o.tolerance;
  if (o.seed) s.solver.seed = *o.seed;
  if (o.output_dir) s.output_dir = *o.output_dir;
  if (o.resolution)
    for (auto& g : s.geometries)
      if ((g.is_mesh() && g.kind != "mesh-file") || g.is_heisenberg()) g.resolution = *o.resolution;
  check_scenario(s);
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& b : kBuiltins) out.push_back({b.name, b.description});
  return out;
}

bool is_builtin(const std::string& name) {
  return std::any_of(std::begin(kBuiltins), std::end(kBuiltins), [&](const Builtin& b) { return name == b.name; });
}

Scenario builtin_scenario(const std::string& name) {
  for (const auto& b : kBuiltins) {
    if (name != b.name) continue;
    Scenario s = parse_scenario(json::parse(b.config));
    s.description = b.description;
    return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

Diagnostics validate_config(const fs::path& path) {
  Diagnostics d;
  try {
    d.normalized = to_json(load_scenario_file(path));
    d.ok = true;
  } catch (const ConfigError& e) {
    d.messages.push_back(e.what());
  } catch (const std::exception& e) {
    d.messages.push_back(path.string() + ": " + e.what());
  }
  return d;
}

bool RunResult::all_satisfied() const {
  return std::all_of(reports.begin(), reports.end(), [](const InequalityReport& r) { return r.all_satisfied(); });
}

RunResult evaluate_scenario(const Scenario& s) {
  try {
    check_scenario(s);
  } catch (const ConfigError& e) {
    throw StageError("config", s.name, e.what());
  }
  RunResult result;
  for (const auto& g : s.geometries) {
    if (g.kind == "model-sphere") run_model_sphere(s, g, result);
    else if (g.kind == "model-torus") run_model_torus(s, g, result);
    else if (g.is_heisenberg()) run_heisenberg(s, g, result);
    else run_mesh(s, g, result);
  }
  return result;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 unavailable");
  }
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

RunResult run_scenario(const Scenario& s) {
  const std::string started = iso_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result = evaluate_scenario(s);

  const fs::path target = fs::path(s.output_dir) / s.name;
  const fs::path staging = fs::path(s.output_dir) / (s.name + ".partial");
  try {
    fs::remove_all(staging);
    fs::create_directories(staging);

    json report = {
        {"toolkit", {{"name", "specineq"}, {"version", SPECINEQ_VERSION}}},
        {"scenario", s.name},
        {"all_satisfied", result.all_satisfied()},
        {"reports", to_json(result.reports)},
    };
    std::string margins, bounds;
    for (const auto& r : result.reports) {
      margins += margin_plot_data(r) + "\n\n";
      if (auto b = bound_plot_data(r); !b.empty()) bounds += b + "\n\n";
    }
    const std::vector<std::pair<std::string, std::string>> files = {
        {"report.json", report.dump(2) + "\n"},
        {"report.csv", to_csv(result.reports)},
        {"margins.dat", margins},
        {"bounds.dat", bounds},
    };
    json digests = json::array();
    for (const auto& [name, text] : files) {
      write_text(staging / name, text);
      digests.push_back({{"file", name}, {"sha256", sha256_file(staging / name)}, {"bytes", text.size()}});
    }

    json stages = json::array();
    for (const auto& t : result.timings) stages.push_back({{"stage", t.stage}, {"label", t.label}, {"seconds", t.seconds}});
    std::size_t rows = 0, violations = 0;
    for (const auto& r : result.reports)
      for (const auto& row : r.rows) {
        ++rows;
        violations += row.satisfied ? 0 : 1;
      }
    result.manifest = {
        {"toolkit", {{"name", "specineq"}, {"version", SPECINEQ_VERSION}}},
        {"scenario", to_json(s)},
        {"seed", s.solver.seed},
        {"started_at", started},
        {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
        {"stages", std::move(stages)},
        {"files", std::move(digests)},
        {"rows", rows},
        {"violations", violations},
        {"all_satisfied", result.all_satisfied()},
    };
    write_text(staging / "manifest.json", result.manifest.dump(2) + "\n");

    fs::remove_all(target);
    fs::rename(staging, target);
  } catch (const std::exception& e) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw StageError("output", s.name, e.what());
  }
  for (const char* name : {"report.json", "report.csv", "margins.dat", "bounds.dat", "manifest.json"})
    result.files.push_back(target / name);
  return result;
}

}  // namespace specineq
