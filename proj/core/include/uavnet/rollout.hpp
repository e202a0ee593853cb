#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uavnet/environment.hpp"

namespace uavnet {

/// A deterministic (or externally seeded) decision rule on the current state.
using Controller = std::function<ActionVector(const Environment&)>;

struct RolloutResult {
  /// Configuration the controller settles on, see greedy_rollout.
  TxConfig committed;
  int committed_step = 0;
  double committed_reward = 0.0;
  /// Ground truth at the committed configuration.
  double sum_rate = 0.0;
  std::vector<double> sinr;
  /// Mean per-step reward over the episode.
  double mean_reward = 0.0;
  /// Ground truth averaged over the T configurations visited after each
  /// action, and every per-cell SINR seen along the way.
  double episode_sum_rate = 0.0;
  std::vector<double> episode_sinr;
};

/// Runs one full episode from reset(episode_seed). Every action moves every
/// beam index, so a controller never rests on a configuration; it commits to
/// the visited TxConfig (initial one included) with the highest observed
/// reward under `spec`, earliest on ties.
RolloutResult greedy_rollout(Environment& env, std::uint64_t episode_seed, const RewardSpec& spec,
                             const Controller& controller);

}  // namespace uavnet
