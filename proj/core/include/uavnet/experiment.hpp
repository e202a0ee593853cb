#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavnet/config.hpp"

namespace uavnet {

struct MethodRow {
  std::string method;
  int num_cells = 0;
  std::uint64_t seed = 0;
  double mean_sum_rate = 0.0;
  double std_sum_rate = 0.0;  // sample standard deviation over eval episodes
  double mean_reward = 0.0;
};

struct SkipRecord {
  std::string method;
  int num_cells = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct CcdfCurve {
  std::string method;
  int num_cells = 0;
  std::vector<double> grid_db;
  std::vector<double> ccdf;
  std::size_t samples = 0;
};

struct MetricsTable {
  std::vector<MethodRow> rows;
  std::vector<CcdfCurve> curves;
  std::vector<SkipRecord> skipped;
};

/// Outcome of one (method, L, seed) cell of the sweep.
struct CellResult {
  MethodRow row;
  std::vector<double> sum_rates;  // one per eval episode
  std::vector<double> sinr_db;    // every cell of every eval episode
  bool skipped = false;
  std::string reason;
};

/// Environment for an L-cell run: the configured env with num_cells = L and
/// the scenario seed taken from master_seed.
EnvConfig env_for(const ExperimentConfig& config, int num_cells);

/// Seeds of the channel instances. Evaluation draws depend on
/// (master_seed, L, seed, episode) only, so every method sees the same
/// instances. With frozen_channels every episode of an (L, seed) pair uses
/// one instance, for training and evaluation alike.
std::uint64_t eval_episode_seed(const ExperimentConfig& config, int num_cells, std::uint64_t seed,
                                int episode);
std::uint64_t train_episode_seed(const ExperimentConfig& config, const std::string& method,
                                 int num_cells, std::uint64_t seed, int episode);

/// Reward spec a method trains on (and commits with at evaluation).
RewardSpec method_reward(const ExperimentConfig& config, const std::string& method);

/// Trains (for learning methods) and evaluates one method on one (L, seed).
CellResult run_cell(const ExperimentConfig& config, const std::string& method, int num_cells,
                    std::uint64_t seed);

/// The full sweep over methods x cells_sweep x seeds, spread over config.jobs
/// threads. Rows come back in (method, L, seed) config order whatever the
/// thread count. Progress lines go to `log` when given.
MetricsTable run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

}  // namespace uavnet
