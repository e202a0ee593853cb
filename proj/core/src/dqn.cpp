#include "uavnet/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace uavnet {

double LinearSchedule::value(long step, long total_steps) const {
  const double horizon = decay_fraction * static_cast<double>(total_steps);
  if (horizon <= 0.0) return end;
  const double frac = std::min(1.0, static_cast<double>(step) / horizon);
  return start + (end - start) * frac;
}

void DqnConfig::validate() const {
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("dqn.hidden widths must be >= 1");
  if (!(discount >= 0.0 && discount < 1.0))
    throw std::invalid_argument("dqn.discount must lie in [0, 1)");
  if (batch_size < 1) throw std::invalid_argument("dqn.batch_size must be >= 1");
  if (buffer_capacity < batch_size)
    throw std::invalid_argument("dqn.buffer_capacity must be >= batch_size");
  if (target_sync_period < 1) throw std::invalid_argument("dqn.target_sync_period must be >= 1");
  if (!(huber_delta > 0.0)) throw std::invalid_argument("dqn.huber_delta must be > 0");
  if (!(adam.learning_rate > 0.0)) throw std::invalid_argument("dqn.learning_rate must be > 0");
}

std::size_t argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() == 0) throw std::invalid_argument("argmax_lowest: empty vector");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return static_cast<std::size_t>(best);
}

namespace {

std::vector<int> layer_widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w{in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> s) {
  return {s.data(), static_cast<Eigen::Index>(s.size())};
}

}  // namespace

DqnAgent::DqnAgent(int state_size, std::size_t num_actions, DqnConfig config, std::uint64_t seed)
    : config_(std::move(config)), buffer_(config_.buffer_capacity) {
  config_.validate();
  if (state_size < 1 || num_actions < 1)
    throw std::invalid_argument("DqnAgent: state_size and num_actions must be >= 1");
  Rng rng(seed);
  online_ = Mlp::he_init(layer_widths(state_size, config_.hidden, static_cast<int>(num_actions)), rng);
  target_ = online_;
  optimizer_ = Adam(online_, config_.adam);
}

Eigen::VectorXd DqnAgent::q_values(std::span<const double> features) const {
  q_evaluations_ += num_actions();
  return online_.forward(Eigen::VectorXd(as_vector(features)));
}

std::size_t DqnAgent::greedy_action(std::span<const double> features) const {
  return argmax_lowest(q_values(features));
}

std::size_t DqnAgent::act(std::span<const double> features, double epsilon, Rng& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, num_actions() - 1);
    return pick(rng);
  }
  return greedy_action(features);
}

void DqnAgent::observe(Transition t) {
  t.reward *= config_.reward_scale;
  buffer_.push(std::move(t));
}

double DqnAgent::train_step(Rng& rng) {
  const auto batch = buffer_.sample(config_.batch_size, rng);
  return train_step(batch);
}

double DqnAgent::train_step(std::span<const Transition> batch) {
  if (batch.empty()) throw std::invalid_argument("DqnAgent::train_step: empty minibatch");
  const auto n = static_cast<Eigen::Index>(batch.size());
  const auto d = static_cast<Eigen::Index>(state_size());
  Eigen::MatrixXd states(d, n);
  Eigen::MatrixXd next_states(d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = batch[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(t.state.size()) != d ||
        static_cast<Eigen::Index>(t.next_state.size()) != d)
      throw std::invalid_argument("DqnAgent::train_step: transition has wrong state size");
    if (t.action >= num_actions())
      throw std::invalid_argument("DqnAgent::train_step: action out of range");
    states.col(i) = as_vector(t.state);
    next_states.col(i) = as_vector(t.next_state);
  }

  const Eigen::MatrixXd next_q = target_.forward_batch(next_states);
  Mlp::Tape tape;
  const Eigen::MatrixXd q = online_.forward(states, tape);

  Eigen::MatrixXd upstream = Eigen::MatrixXd::Zero(q.rows(), n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = batch[static_cast<std::size_t>(i)];
    const double bootstrap = t.done ? 0.0 : next_q.col(i).maxCoeff();
    const double target = t.reward + config_.discount * bootstrap;
    const auto a = static_cast<Eigen::Index>(t.action);
    const double residual = q(a, i) - target;
    loss += huber(residual, config_.huber_delta);
    upstream(a, i) = huber_grad(residual, config_.huber_delta) / static_cast<double>(n);
  }
  optimizer_.step(online_, online_.backward(tape, upstream));
  ++train_steps_;
  if (train_steps_ % config_.target_sync_period == 0) sync_target();
  return loss / static_cast<double>(n);
}

void DqnAgent::save(std::ostream& out, const CheckpointHeader& header) const {
  write_checkpoint(out, header, {&online_, &target_});
}

void DqnAgent::load(std::istream& in, CheckpointHeader& header) {
  auto nets = read_checkpoint(in, header);
  if (nets.size() != 2) throw std::runtime_error("DqnAgent::load: expected two networks");
  if (nets[0].widths() != online_.widths())
    throw std::runtime_error("DqnAgent::load: network shape mismatch");
  online_ = std::move(nets[0]);
  target_ = std::move(nets[1]);
  optimizer_ = Adam(online_, config_.adam);
}

ActionVector dqn_act(const DqnAgent& agent, std::span<const double> features, double epsilon,
                     Rng& rng, int num_cells) {
  if (agent.num_actions() != action_space_size(num_cells))
    throw std::invalid_argument("dqn_act: agent output width is not 2^(2L)");
  return ActionVector::from_index(agent.act(features, epsilon, rng), num_cells);
}

StepModel joint_step_model(const RewardSpec& spec) {
  StepModel model;
  model.next_tx = [](const Environment& env, std::size_t action) {
    return apply_action(env.state().tx, ActionVector::from_index(action, env.num_cells()),
                        env.powers().size(), env.codebook().size());
  };
  model.reward = [spec](const Environment& env, const StepOutcome&) {
    return env.reward_for(env.state().tx, spec);
  };
  return model;
}

TrainingLog train_dqn(Environment& env, DqnAgent& agent, int episodes,
                      const std::function<std::uint64_t(int)>& episode_seed,
                      const StepModel& model, Rng& rng) {
  TrainingLog log;
  const long total_steps = static_cast<long>(episodes) * env.config().horizon;
  // The model supplies the training reward; the env's own reward is unused here.
  const RewardSpec unused;
  long step = 0;
  for (int e = 0; e < episodes; ++e) {
    env.reset(episode_seed(e));
    double ret = 0.0;
    double loss_sum = 0.0;
    int loss_count = 0;
    while (!env.done()) {
      const std::vector<double> s = env.state().features;
      const double eps = agent.config().epsilon.value(step, total_steps);
      const std::size_t a = agent.act(s, eps, rng);
      const TxConfig next = model.next_tx(env, a);
      const StepOutcome out = env.step_to(next, unused);
      const double r = model.reward(env, out);
      ret += r;
      // The horizon is a time limit, not a terminal state: keep bootstrapping.
      agent.observe({s, a, r, out.features, false});
      if (agent.ready()) {
        loss_sum += agent.train_step(rng);
        ++loss_count;
      }
      ++step;
    }
    log.episode_returns.push_back(ret);
    log.episode_mean_loss.push_back(loss_count > 0 ? loss_sum / loss_count : 0.0);
  }
  return log;
}

}  // namespace uavnet
