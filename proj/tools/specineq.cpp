#include "specineq/scenario.hpp"

#include <CLI11.hpp>

#include <future>
#include <iostream>
#include <mutex>

namespace {

using specineq::Scenario;

Scenario resolve(const std::string& target) {
  if (specineq::is_builtin(target)) return specineq::builtin_scenario(target);
  if (std::filesystem::exists(target)) return specineq::load_scenario_file(target);
  throw specineq::ConfigError("'" + target + "' is neither a built-in scenario nor a config file (see `list`)");
}

struct Outcome {
  bool ok = false;
  bool satisfied = false;
  std::string text;
};

Outcome run_one(Scenario scenario, const specineq::Overrides& overrides) {
  Outcome out;
  std::ostringstream log;
  try {
    specineq::apply_overrides(scenario, overrides);
    const auto result = specineq::run_scenario(scenario);
    std::size_t rows = 0, bad = 0;
    for (const auto& r : result.reports)
      for (const auto& row : r.rows) {
        ++rows;
        if (!row.satisfied) {
          ++bad;
          log << "  violated: " << r.theorem << (r.label.empty() ? "" : "@" + r.label) << " k=" << row.k
              << " margin=" << specineq::format_number(row.margin) << "\n";
        }
      }
    log << scenario.name << ": " << rows - bad << "/" << rows << " satisfied -> "
        << (std::filesystem::path(scenario.output_dir) / scenario.name).string() << "\n";
    out.ok = true;
    out.satisfied = bad == 0;
  } catch (const specineq::ConfigError& e) {
    log << "error: scenario '" << scenario.name << "', stage 'config': " << e.what() << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
  }
  out.text = log.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal eigenvalue inequality checks on model spaces, meshes and Heisenberg grids"};
  app.require_subcommand(1);

  specineq::Overrides overrides;
  std::vector<std::string> targets;
  bool parallel = false;
  auto* run = app.add_subcommand("run", "run built-in scenarios or config files");
  run->add_option("scenario", targets, "scenario name or config path ('all' for every built-in)")->required();
  run->add_option("--k-max", overrides.k_max, "largest k");
  run->add_option("--tol", overrides.tolerance, "verdict tolerance for floating-point data")->check(CLI::NonNegativeNumber);
  run->add_option("--seed", overrides.seed, "eigensolver seed");
  run->add_option("--out", overrides.output_dir, "output directory");
  run->add_option("--resolution", overrides.resolution, "mesh subdivisions / rings / grid nodes per axis");
  run->add_flag("--parallel", parallel, "run independent scenarios concurrently");

  auto* list = app.add_subcommand("list", "list built-in scenarios");
  std::string config_path;
  auto* validate = app.add_subcommand("validate", "check a config file without solving");
  validate->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& s : specineq::list_scenarios()) std::cout << s.name << "\t" << s.description << "\n";
    return 0;
  }

  if (validate->parsed()) {
    const auto d = specineq::validate_config(config_path);
    if (!d.ok) {
      for (const auto& m : d.messages) std::cerr << "invalid: " << m << "\n";
      return 2;
    }
    std::cout << d.normalized.dump(2) << "\n";
    return 0;
  }

  if (overrides.k_max && *overrides.k_max < 1) {
    std::cerr << "error: --k-max must be >= 1\n";
    return 2;
  }

  std::vector<Scenario> scenarios;
  try {
    for (const auto& t : targets) {
      if (t == "all") {
        for (const auto& s : specineq::list_scenarios()) scenarios.push_back(specineq::builtin_scenario(s.name));
      } else {
        scenarios.push_back(resolve(t));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<Outcome> outcomes;
  if (parallel) {
    std::vector<std::future<Outcome>> jobs;
    for (const auto& s : scenarios) jobs.push_back(std::async(std::launch::async, run_one, s, overrides));
    for (auto& j : jobs) outcomes.push_back(j.get());
  } else {
    for (const auto& s : scenarios) outcomes.push_back(run_one(s, overrides));
  }

  bool errors = false, satisfied = true;
  for (const auto& o : outcomes) {
    (o.ok ? std::cout : std::cerr) << o.text;
    errors = errors || !o.ok;
    satisfied = satisfied && o.satisfied;
  }
  if (errors) return 2;
  return satisfied ? 0 : 1;
}
