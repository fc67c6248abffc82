#pragma once

#include "specineq/eigensolver.hpp"
#include "specineq/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specineq {

/// One geometry of a scenario. Only the fields relevant to `kind` are read.
///   model-sphere   n
///   model-torus    periods (side lengths in units of 2 pi, rational text)
///   icosphere      resolution (subdivisions), radius
///   ellipsoid      axes [a, b, c], resolution
///   clifford-torus resolution
///   flat-torus     lengths [lx, ly], resolution
///   disk           resolution (rings), radius
///   spherical-cap  angle, resolution
///   planar-patch   resolution
///   mesh-file      path
///   heisenberg-box n, lower, upper, resolution (interior nodes per axis)
struct GeometrySpec {
  std::string kind;
  std::string label;
  int n = 2;
  int resolution = 0;
  double radius = 1.0;
  std::vector<double> axes;
  std::vector<std::string> periods;
  std::vector<double> lengths;
  double angle = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  std::string path;

  bool is_model() const { return kind == "model-sphere" || kind == "model-torus"; }
  bool is_mesh() const;
  bool is_heisenberg() const { return kind == "heisenberg-box"; }
};

/// zero, constant (values = c list), geometric (values = g list, q = g |h|^2), tabulated (path,
/// one value per mesh vertex). Each value is a separate case of the scenario.
struct PotentialSpec {
  std::string kind = "zero";
  std::vector<std::string> values;
  std::string path;
};

struct EigenmapSpec {
  std::string lambda = "1";
  int resolution = 64;       ///< mesh used to validate the map
  double tolerance = 1e-2;   ///< on ||phi|^2 - 1| and ||d phi|^2 - lambda|
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<GeometrySpec> geometries;
  PotentialSpec potential;
  std::vector<Theorem> theorems;
  std::size_t k_min = 1;
  std::size_t k_max = 10;
  double tolerance = 1e-3;   ///< floating-point verdicts; exact data is always judged at 0
  std::string ambient = "euclidean";
  int saturation_levels = 8;
  std::optional<EigenmapSpec> eigenmap;
  SolveConfig solver;
  std::string output_dir = "out";
  std::filesystem::path base_dir;  ///< relative paths in the config resolve against this
};

/// Flags that override config keys.
struct Overrides {
  std::optional<std::size_t> k_max;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<int> resolution;
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

/// Parses and checks a scenario document. Throws ConfigError naming the offending field.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads a config file; syntax errors carry line and column.
Scenario load_scenario_file(const std::filesystem::path& path);

/// Normalised form: every key present, defaults filled in.
nlohmann::json to_json(const Scenario& scenario);

/// Static consistency checks (theorem list, k range, theorem/geometry pairing). Throws ConfigError.
void check_scenario(const Scenario& scenario);

struct ScenarioInfo {
  std::string name;
  std::string description;
};

std::vector<ScenarioInfo> list_scenarios();
Scenario builtin_scenario(const std::string& name);
bool is_builtin(const std::string& name);

struct Diagnostics {
  bool ok = false;
  std::vector<std::string> messages;
  nlohmann::json normalized;
};

/// Parses and checks a config file without solving anything.
Diagnostics validate_config(const std::filesystem::path& path);

/// Failure inside a run, tagged with the stage and scenario.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::string scenario, const std::string& message)
      : std::runtime_error("scenario '" + scenario + "', stage '" + stage + "': " + message),
        stage_(std::move(stage)),
        scenario_(std::move(scenario)) {}
  const std::string& stage() const { return stage_; }
  const std::string& scenario() const { return scenario_; }

 private:
  std::string stage_;
  std::string scenario_;
};

struct StageTiming {
  std::string stage;
  std::string label;
  double seconds = 0;
};

struct RunResult {
  std::vector<InequalityReport> reports;
  std::vector<StageTiming> timings;
  nlohmann::json manifest;
  std::vector<std::filesystem::path> files;
  bool all_satisfied() const;
};

/// Evaluates every theorem on every geometry and potential case without writing anything.
RunResult evaluate_scenario(const Scenario& scenario);

/// evaluate_scenario, then writes report.json, report.csv, margins.dat, bounds.dat and
/// manifest.json under <output_dir>/<name>/. On failure nothing is left behind.
RunResult run_scenario(const Scenario& scenario);

/// Hex SHA-256 of a file.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace specineq
