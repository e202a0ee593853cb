#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "uavnet/adam.hpp"
#include "uavnet/environment.hpp"
#include "uavnet/mlp.hpp"
#include "uavnet/replay_buffer.hpp"
#include "uavnet/serialization.hpp"

namespace uavnet {

/// Linear decay from `start` to `end` over the first `decay_fraction` of training.
struct LinearSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_fraction = 0.8;

  double value(long step, long total_steps) const;
};

struct DqnConfig {
  std::vector<int> hidden{128, 128};
  AdamConfig adam{};
  double discount = 0.9;
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 50000;
  std::size_t warmup = 500;
  int target_sync_period = 250;
  double huber_delta = 1.0;
  /// Multiplies rewards as they enter the replay buffer.
  double reward_scale = 1.0;
  LinearSchedule epsilon{1.0, 0.05, 0.8};

  void validate() const;
};

/// First index of the maximum.
std::size_t argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& values);

/// Deep Q-network over a flat discrete action set: one forward pass yields
/// every action's value, so a decision costs num_actions Q evaluations.
class DqnAgent {
 public:
  DqnAgent(int state_size, std::size_t num_actions, DqnConfig config, std::uint64_t seed);

  int state_size() const { return online_.input_size(); }
  std::size_t num_actions() const { return static_cast<std::size_t>(online_.output_size()); }
  const DqnConfig& config() const { return config_; }

  Eigen::VectorXd q_values(std::span<const double> features) const;
  std::size_t greedy_action(std::span<const double> features) const;
  /// epsilon-greedy: uniform action with probability epsilon.
  std::size_t act(std::span<const double> features, double epsilon, Rng& rng) const;

  /// Stores a transition; its reward is multiplied by config().reward_scale.
  void observe(Transition t);
  bool ready() const { return buffer_.size() >= std::max(config_.warmup, config_.batch_size); }

  /// Samples a minibatch from the buffer and trains on it.
  double train_step(Rng& rng);
  /// Huber TD loss against r + discount * max_a' Q_target(s', a') on the given
  /// minibatch, one Adam step, hard target copy every target_sync_period steps.
  double train_step(std::span<const Transition> batch);

  Mlp& online() { return online_; }
  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  void sync_target() { target_ = online_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  long train_steps() const { return train_steps_; }

  /// Q values computed by q_values/greedy_action/act since the last reset.
  std::uint64_t q_evaluations() const { return q_evaluations_; }
  void reset_counters() { q_evaluations_ = 0; }

  void save(std::ostream& out, const CheckpointHeader& header) const;
  /// Replaces the online and target networks from a checkpoint written by save().
  void load(std::istream& in, CheckpointHeader& header);

 private:
  DqnConfig config_;
  Mlp online_;
  Mlp target_;
  Adam optimizer_;
  ReplayBuffer buffer_;
  long train_steps_ = 0;
  mutable std::uint64_t q_evaluations_ = 0;
};

/// Joint-action convenience: index -> ActionVector for an agent with 2^(2L) outputs.
ActionVector dqn_act(const DqnAgent& agent, std::span<const double> features, double epsilon,
                     Rng& rng, int num_cells);

/// How a chosen action index moves the environment and what reward it earns.
/// The defaults interpret the index as a joint ActionVector and use the
/// given RewardSpec.
struct StepModel {
  std::function<TxConfig(const Environment&, std::size_t action)> next_tx;
  std::function<double(const Environment&, const StepOutcome&)> reward;
};

StepModel joint_step_model(const RewardSpec& spec);

struct TrainingLog {
  std::vector<double> episode_returns;
  std::vector<double> episode_mean_loss;
};

/// Standard episodic DQN loop: epsilon-greedy rollouts, one train step per env
/// step once the buffer is warm. Episode e is reset with episode_seed(e).
TrainingLog train_dqn(Environment& env, DqnAgent& agent, int episodes,
                      const std::function<std::uint64_t(int)>& episode_seed,
                      const StepModel& model, Rng& rng);

}  // namespace uavnet
