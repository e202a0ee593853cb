#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "uavnet/adam.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/environment.hpp"
#include "uavnet/mlp.hpp"
#include "uavnet/replay_buffer.hpp"

namespace uavnet {

struct WolpertingerConfig {
  std::vector<int> actor_hidden{128, 128};
  std::vector<int> critic_hidden{128, 128};
  AdamConfig actor_adam{1e-4, 0.9, 0.999, 1e-8};
  AdamConfig critic_adam{1e-3, 0.9, 0.999, 1e-8};
  double discount = 0.9;
  std::size_t batch_size = 32;
  std::size_t buffer_capacity = 50000;
  std::size_t warmup = 500;
  std::size_t k = 8;
  double tau = 0.005;
  double huber_delta = 1.0;
  double reward_scale = 1.0;
  /// Standard deviation of the Gaussian noise added to the proto-action.
  LinearSchedule noise{0.3, 0.01, 0.8};

  void validate() const;
};

/// Actor-critic over the 2L-bit joint action. The actor emits a proto-action
/// in [0,1]^(2L) (sigmoid output); its k nearest hypercube corners are scored
/// by the critic Q(state ++ action bits) and the best one is played.
class WolpertingerAgent {
 public:
  struct TrainStats {
    double critic_loss = 0.0;
    double actor_objective = 0.0;  // mean critic value of the actor's own actions
  };

  WolpertingerAgent(int state_size, int num_cells, WolpertingerConfig config, std::uint64_t seed);

  int num_cells() const { return num_cells_; }
  int state_size() const { return state_size_; }
  std::size_t k() const { return config_.k; }
  void set_k(std::size_t k);
  const WolpertingerConfig& config() const { return config_; }

  Eigen::VectorXd proto_action(std::span<const double> features) const;
  /// Critic argmax over the k corners nearest `proto`, lowest index on ties.
  std::uint64_t select(std::span<const double> features, std::span<const double> proto) const;
  /// proto + N(0, sigma^2) noise (clipped to [0,1]), then select().
  ActionVector act(std::span<const double> features, double noise_sigma, Rng& rng) const;
  ActionVector greedy(std::span<const double> features) const;

  double critic_value(std::span<const double> features, const ActionVector& action) const;

  void observe(Transition t);
  bool ready() const { return buffer_.size() >= std::max(config_.warmup, config_.batch_size); }
  TrainStats train_step(Rng& rng);
  /// Critic: Huber TD regression with the next action chosen by the target
  /// actor/critic pair through the same k-NN mapping. Actor: one ascent step on
  /// the critic's value of the actor's action. Both targets then move by tau.
  TrainStats train_step(std::span<const Transition> batch);

  /// Actor ascent step given dQ/da (2L x batch) for the actor's actions on `states`.
  void actor_step(const Eigen::MatrixXd& states,
                  const std::function<Eigen::MatrixXd(const Eigen::MatrixXd& states,
                                                      const Eigen::MatrixXd& actions)>& action_grad);

  /// Mean online-critic value of the online actor's proto-actions on `states`,
  /// and its gradient with respect to the actor parameters.
  double actor_objective(const Eigen::MatrixXd& states) const;
  MlpGradients actor_objective_gradient(const Eigen::MatrixXd& states) const;

  Mlp& actor() { return actor_; }
  const Mlp& actor() const { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& critic() const { return critic_; }

  /// (state, action) pairs scored by the critic in select() since the last reset.
  std::uint64_t critic_calls() const { return critic_calls_; }
  void reset_counters() { critic_calls_ = 0; }

  void save(std::ostream& out, const CheckpointHeader& header) const;

 private:
  std::uint64_t select_with(const Mlp& critic, std::span<const double> features,
                            std::span<const double> proto, bool count) const;
  Eigen::MatrixXd actor_actions(const Mlp& actor, const Eigen::MatrixXd& states) const;

  int state_size_;
  int num_cells_;
  WolpertingerConfig config_;
  Mlp actor_, critic_, actor_target_, critic_target_;
  Adam actor_opt_, critic_opt_;
  ReplayBuffer buffer_;
  mutable std::uint64_t critic_calls_ = 0;
};

/// Episodic training loop mirroring train_dqn, with proto-action noise.
TrainingLog train_wolpertinger(Environment& env, WolpertingerAgent& agent, int episodes,
                               const std::function<std::uint64_t(int)>& episode_seed,
                               const RewardSpec& reward, Rng& rng);

}  // namespace uavnet
