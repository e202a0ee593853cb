#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uavnet/baselines.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/environment.hpp"
#include "uavnet/sequential.hpp"
#include "uavnet/wolpertinger.hpp"

namespace uavnet {

/// Bad or inconsistent configuration. `what()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CcdfGrid {
  double min_db = -20.0;
  double max_db = 40.0;
  double step_db = 0.5;
};

struct BaselineConfig {
  std::uint64_t brute_force_cap = 10'000'000;
  MrtMode mrt_mode = MrtMode::Codebook;
  int threads = 1;
};

struct AgentSettings {
  DqnConfig dqn;
  WolpertingerConfig wolpertinger;
  /// episodes_per_agent is ignored here: each cell agent trains for the
  /// experiment's `episodes`.
  SequentialConfig sequential;
  /// Joint DQN is skipped when 2^(2L) exceeds this.
  std::uint64_t max_joint_actions = 65536;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  std::vector<int> cells_sweep{2};
  std::vector<std::uint64_t> seeds{0};
  int episodes = 200;
  int eval_episodes = 20;
  std::vector<std::string> methods{"brute", "mrt", "random", "dqn"};
  /// Train and evaluate on a single channel instance per (L, seed).
  bool frozen_channels = false;
  std::string output_dir = "results";
  int jobs = 1;
  CcdfGrid ccdf;
  /// scenario.num_cells comes from cells_sweep and scenario.rng_seed from
  /// master_seed; the values stored here are ignored.
  EnvConfig env;
  AgentSettings agent;
  BaselineConfig baseline;

  /// Throws ConfigError on the first invalid field.
  void validate() const;
};

/// brute, mrt, random, random-search, dqn, dqn-global, dqn-serving,
/// dqn-measured, dqn-rsrq, wolpertinger, sequential. `random` is scored over
/// the configurations it visits; `random-search` plays the same actions but
/// commits to the best-reward configuration like the learned controllers.
const std::vector<std::string_view>& known_methods();

/// Parses a JSON document. Absent keys keep their defaults, unknown keys and
/// type mismatches are errors. The result is validated.
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Every field, defaults included, as JSON that parses back to the same config.
std::string to_json(const ExperimentConfig& config);

}  // namespace uavnet
