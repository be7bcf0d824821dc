// bouss: batch runner for abcd Boussinesq experiments over moving bottoms.
//
//   bouss run <config>               run the experiment described by <config>
//   bouss report <dir>               decay statistics for a finished decay-run
//   bouss region-map <config>        classify an (a,c) grid
//   bouss audit-bathymetry <config>  check the bottom hypotheses
//
// Artifacts go to $BOUSS_OUTPUT_ROOT/<output_dir> (working directory if unset).
// Exit codes: 0 pass, 1 usage or config error, 2 runtime abort, 3 acceptance failure.

#include "bouss/harness/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace bouss::harness;

int finish(const Outcome& o) {
  std::cout << o.message << "\n";
  if (!o.dir.empty()) std::cout << "artifacts: " << o.dir.string() << "\n";
  return o.exit_code;
}

int run_config(const std::string& path, std::optional<ExperimentKind> expected) {
  ExperimentConfig c = load_config(path);
  if (expected && c.kind != *expected)
    throw ConfigError(path + ": experiment kind is '" + kind_name(c.kind) + "', expected '" + kind_name(*expected) + "'");
  return finish(run_experiment(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boussinesq moving-bottom experiment runner"};
  app.require_subcommand(1);

  std::string config_path, run_dir;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("config", config_path, "Config file")->required();
  auto* report = app.add_subcommand("report", "Decay report for a finished decay-run directory");
  report->add_option("dir", run_dir, "Run directory")->required();
  auto* map = app.add_subcommand("region-map", "Classify an (a,c) parameter grid");
  map->add_option("config", config_path, "Config file")->required();
  auto* audit = app.add_subcommand("audit-bathymetry", "Audit the bottom hypotheses");
  audit->add_option("config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) return run_config(config_path, std::nullopt);
    if (*map) return run_config(config_path, ExperimentKind::region_map);
    if (*audit) return run_config(config_path, ExperimentKind::hypothesis_audit);
    if (*report) return finish(decay_report(run_dir));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const bouss::ParamError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid setting: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeAbort;
  }
  return kUsageError;
}
