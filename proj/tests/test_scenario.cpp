#include "specineq/scenario.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace specineq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("specineq_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string config_error(const std::string& text) {
  try {
    parse_scenario(nlohmann::json::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("built-in scenarios") {
  const auto list = list_scenarios();
  CHECK(list.size() == 11);
  for (const char* name : {"sphere-exact", "sphere-saturation", "icosphere-yang", "icosphere-geometric-potential",
                           "ellipsoid-yang", "clifford-torus-reilly", "flat-torus-eigenmap", "disk-dirichlet",
                           "heisenberg-box", "immersibility-audit", "reilly-chain"}) {
    CHECK(is_builtin(name));
    const auto s = builtin_scenario(name);
    CHECK(s.name == name);
    // the normalised form parses back to itself
    CHECK(to_json(parse_scenario(to_json(s))) == to_json(s));
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), ConfigError);
}

TEST_CASE("config diagnostics name the field") {
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "icosphere", "resoltion": 3}, "theorems": ["yang"]})")
            .find("field 'geometry.resoltion': unknown key") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "icosphere"}, "theorems": []})")
            .find("empty theorem list") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "icosphere"}, "theorems": ["yang"], "k_max": "9"})")
            .find("field 'k_max'") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "torus"}, "theorems": ["yang"]})")
            .find("unknown geometry kind") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "disk", "resolution": 4}, "theorems": ["reilly"]})")
            .find("closed") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "icosphere"}, "theorems": ["kohn"]})")
            .find("does not apply") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "icosphere"}, "theorems": ["yang"],
                         "potential": {"kind": "geometric", "values": ["1/0"]}})")
            .find("potential.values[0]") != std::string::npos);
  CHECK(config_error(R"({"name": "x", "geometry": {"kind": "heisenberg-box", "resolution": 2},
                         "theorems": ["kohn"], "k_max": 10})")
            .find("fewer interior nodes") != std::string::npos);
}

TEST_CASE("validate_config reports syntax errors with line numbers and echoes valid configs") {
  const auto dir = scratch("validate");
  const auto bad = write_config(dir, "{\n  \"name\": \"x\",\n  \"geometry\": {\"kind\": \"icosphere\"\n}\n");
  const auto d = validate_config(bad);
  CHECK_FALSE(d.ok);
  REQUIRE(d.messages.size() == 1);
  CHECK(d.messages[0].find("line") != std::string::npos);

  const auto good = write_config(dir, R"({"name": "mine", "geometry": {"kind": "icosphere", "resolution": 2},
                                          "theorems": ["yang"], "k_max": 5})");
  const auto ok = validate_config(good);
  CHECK(ok.ok);
  CHECK(ok.normalized["k_max"] == 5);
  CHECK(ok.normalized["tolerance"] == 1e-3);
  CHECK(ok.normalized["geometry"][0]["label"] == "icosphere");
}

TEST_CASE("overrides") {
  auto s = builtin_scenario("icosphere-yang");
  Overrides o;
  o.k_max = 5;
  o.tolerance = 1e-4;
  o.seed = 99;
  o.resolution = 2;
  o.output_dir = "elsewhere";
  apply_overrides(s, o);
  CHECK(s.k_max == 5);
  CHECK(s.tolerance == 1e-4);
  CHECK(s.solver.seed == 99);
  CHECK(s.geometries[0].resolution == 2);
  CHECK(s.output_dir == "elsewhere");
  Overrides tiny;
  tiny.resolution = 1;
  auto h = builtin_scenario("heisenberg-box");
  CHECK_THROWS_AS(apply_overrides(h, tiny), ConfigError);
}

TEST_CASE("sphere-exact run writes reports whose digests match") {
  const auto dir = scratch("exact");
  auto s = builtin_scenario("sphere-exact");
  s.output_dir = dir.string();
  const auto result = run_scenario(s);
  CHECK(result.all_satisfied());
  for (const auto& r : result.reports)
    if (r.theorem == "yang")
      for (const auto& row : r.rows) CHECK(row.exact_margin == "0");
  for (const auto& f : result.manifest["files"]) {
    const fs::path p = dir / "sphere-exact" / f["file"].get<std::string>();
    CHECK(fs::exists(p));
    CHECK(sha256_file(p) == f["sha256"].get<std::string>());
  }
  CHECK(fs::exists(dir / "sphere-exact" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "sphere-exact.partial"));
}

TEST_CASE("csv output is byte-identical across runs") {
  const auto dir = scratch("repeat");
  auto s = builtin_scenario("icosphere-geometric-potential");
  s.geometries[0].resolution = 3;
  s.k_max = 12;
  s.output_dir = (dir / "a").string();
  run_scenario(s);
  s.output_dir = (dir / "b").string();
  run_scenario(s);
  const std::string a = slurp(dir / "a" / s.name / "report.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b" / s.name / "report.csv"));
  CHECK(slurp(dir / "a" / s.name / "report.json") == slurp(dir / "b" / s.name / "report.json"));
}

TEST_CASE("stage errors carry stage and scenario and leave no output") {
  const auto dir = scratch("errors");
  auto s = parse_scenario(nlohmann::json::parse(R"({"name": "broken",
      "geometry": {"kind": "mesh-file", "path": "missing.mesh"}, "theorems": ["yang"]})"),
                          dir);
  s.output_dir = dir.string();
  try {
    run_scenario(s);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "geometry");
    CHECK(e.scenario() == "broken");
  }
  CHECK_FALSE(fs::exists(dir / "broken"));

  auto big = builtin_scenario("icosphere-yang");
  big.geometries[0].resolution = 0;  // 12 vertices
  big.k_max = 20;
  big.output_dir = dir.string();
  try {
    run_scenario(big);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "solve");
  }
  CHECK_FALSE(fs::exists(dir / "icosphere-yang"));

  Scenario empty = builtin_scenario("sphere-exact");
  empty.theorems.clear();
  empty.output_dir = dir.string();
  CHECK_THROWS_AS(run_scenario(empty), StageError);
  CHECK_FALSE(fs::exists(dir / "sphere-exact"));
}

TEST_CASE("mesh files and tabulated potentials resolve relative to the config") {
  const auto dir = scratch("files");
  {
    const int m = 4;
    std::ofstream mesh(dir / "square.mesh");
    mesh << m * m << ' ' << 2 * (m - 1) * (m - 1) << " 3\n";
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) mesh << j << ' ' << i << " 0\n";
    for (int i = 0; i + 1 < m; ++i)
      for (int j = 0; j + 1 < m; ++j) {
        const int a = m * i + j;
        mesh << a << ' ' << a + 1 << ' ' << a + m + 1 << '\n' << a << ' ' << a + m + 1 << ' ' << a + m << '\n';
      }
    std::ofstream q(dir / "q.txt");
    for (int v = 0; v < m * m; ++v) q << 0.5 << '\n';
  }
  const auto cfg = write_config(dir, R"({"name": "tiny",
      "geometry": {"kind": "mesh-file", "path": "square.mesh"},
      "potential": {"kind": "tabulated", "path": "q.txt"},
      "theorems": ["yang"], "k_min": 1, "k_max": 1, "output": {"dir": "out"}})");
  auto s = load_scenario_file(cfg);
  const auto result = evaluate_scenario(s);
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].rows.size() == 1);
  CHECK(result.reports[0].source.find("16 vertices") != std::string::npos);
}
