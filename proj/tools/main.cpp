// uavnet run --config <path> [--out <dir>] [--methods a,b,c] [--seed-offset n] [--jobs n]
//
// On failure prints one JSON line {"error": <kind>, "message": <text>} to
// stderr and exits nonzero: 2 for usage/config errors, 3 for output errors,
// 1 for anything else.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uavnet/config.hpp"
#include "uavnet/experiment.hpp"
#include "uavnet/outputs.hpp"

namespace {

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cell power and beam control experiments"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "Run an experiment sweep");

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> methods;
  std::uint64_t seed_offset = 0;
  int jobs = 0;
  bool quiet = false;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--methods", methods, "Comma-separated methods (overrides methods)")
      ->delimiter(',');
  run->add_option("--seed-offset", seed_offset, "Added to every seed in the config");
  run->add_option("--jobs", jobs, "Worker threads (overrides jobs)")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "No progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  uavnet::ExperimentConfig config;
  try {
    config = uavnet::load_experiment_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!methods.empty()) config.methods = methods;
    if (jobs > 0) config.jobs = jobs;
    for (auto& s : config.seeds) s += seed_offset;
    config.validate();
  } catch (const uavnet::ConfigError& e) {
    return fail("config", e.what(), 2);
  }

  try {
    uavnet::prepare_output_dir(config.output_dir);
  } catch (const uavnet::OutputError& e) {
    return fail("output", e.what(), 3);
  }

  try {
    const uavnet::MetricsTable table = uavnet::run_experiment(config, quiet ? nullptr : &std::cerr);
    uavnet::write_outputs(table, config, config.output_dir);
  } catch (const uavnet::OutputError& e) {
    return fail("output", e.what(), 3);
  } catch (const uavnet::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
