#include "uavnet/wolpertinger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavnet/knn.hpp"
#include "uavnet/serialization.hpp"

namespace uavnet {

void WolpertingerConfig::validate() const {
  for (int h : actor_hidden)
    if (h < 1) throw std::invalid_argument("wolpertinger.actor_hidden widths must be >= 1");
  for (int h : critic_hidden)
    if (h < 1) throw std::invalid_argument("wolpertinger.critic_hidden widths must be >= 1");
  if (!(discount >= 0.0 && discount < 1.0))
    throw std::invalid_argument("wolpertinger.discount must lie in [0, 1)");
  if (batch_size < 1 || buffer_capacity < batch_size)
    throw std::invalid_argument("wolpertinger: need 1 <= batch_size <= buffer_capacity");
  if (k < 1) throw std::invalid_argument("wolpertinger.k must be >= 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("wolpertinger.tau must lie in (0, 1]");
  if (!(huber_delta > 0.0)) throw std::invalid_argument("wolpertinger.huber_delta must be > 0");
}

namespace {

std::vector<int> layer_widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w{in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

void write_bits(Eigen::Ref<Eigen::VectorXd> dst, std::uint64_t index) {
  for (Eigen::Index i = 0; i < dst.size(); ++i) dst[i] = static_cast<double>((index >> i) & 1U);
}

}  // namespace

WolpertingerAgent::WolpertingerAgent(int state_size, int num_cells, WolpertingerConfig config,
                                     std::uint64_t seed)
    : state_size_(state_size),
      num_cells_(num_cells),
      config_(std::move(config)),
      buffer_(config_.buffer_capacity) {
  config_.validate();
  if (state_size < 1) throw std::invalid_argument("WolpertingerAgent: state_size must be >= 1");
  const std::uint64_t actions = action_space_size(num_cells);
  if (config_.k > actions) throw std::invalid_argument("WolpertingerAgent: k exceeds |A|");
  Rng rng(seed);
  const int bits = 2 * num_cells;
  actor_ = Mlp::he_init(layer_widths(state_size, config_.actor_hidden, bits), rng);
  critic_ = Mlp::he_init(layer_widths(state_size + bits, config_.critic_hidden, 1), rng);
  actor_target_ = actor_;
  critic_target_ = critic_;
  actor_opt_ = Adam(actor_, config_.actor_adam);
  critic_opt_ = Adam(critic_, config_.critic_adam);
}

void WolpertingerAgent::set_k(std::size_t k) {
  if (k < 1 || k > action_space_size(num_cells_))
    throw std::invalid_argument("WolpertingerAgent::set_k: k must be in [1, |A|]");
  config_.k = k;
}

Eigen::MatrixXd WolpertingerAgent::actor_actions(const Mlp& actor, const Eigen::MatrixXd& states) const {
  return sigmoid(actor.forward_batch(states));
}

Eigen::VectorXd WolpertingerAgent::proto_action(std::span<const double> features) const {
  const Eigen::Map<const Eigen::VectorXd> s(features.data(), static_cast<Eigen::Index>(features.size()));
  return actor_actions(actor_, Eigen::MatrixXd(s)).col(0);
}

std::uint64_t WolpertingerAgent::select_with(const Mlp& critic, std::span<const double> features,
                                             std::span<const double> proto, bool count) const {
  const auto candidates = knn_corner_indices(proto, config_.k);
  const auto d = static_cast<Eigen::Index>(state_size_);
  const auto bits = static_cast<Eigen::Index>(2 * num_cells_);
  Eigen::MatrixXd inputs(d + bits, static_cast<Eigen::Index>(candidates.size()));
  const Eigen::Map<const Eigen::VectorXd> s(features.data(), d);
  for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
    inputs.col(c).head(d) = s;
    write_bits(inputs.col(c).tail(bits), candidates[static_cast<std::size_t>(c)]);
  }
  if (count) critic_calls_ += candidates.size();
  const Eigen::MatrixXd q = critic.forward_batch(inputs);

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const double qc = q(0, static_cast<Eigen::Index>(c));
    const double qb = q(0, static_cast<Eigen::Index>(best));
    if (qc > qb || (qc == qb && candidates[c] < candidates[best])) best = c;
  }
  return candidates[best];
}

std::uint64_t WolpertingerAgent::select(std::span<const double> features,
                                        std::span<const double> proto) const {
  return select_with(critic_, features, proto, true);
}

ActionVector WolpertingerAgent::act(std::span<const double> features, double noise_sigma,
                                    Rng& rng) const {
  Eigen::VectorXd proto = proto_action(features);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (Eigen::Index i = 0; i < proto.size(); ++i)
      proto[i] = std::clamp(proto[i] + noise(rng), 0.0, 1.0);
  }
  return ActionVector::from_index(
      select(features, std::span<const double>(proto.data(), static_cast<std::size_t>(proto.size()))),
      num_cells_);
}

ActionVector WolpertingerAgent::greedy(std::span<const double> features) const {
  Rng unused(0);
  return act(features, 0.0, unused);
}

double WolpertingerAgent::critic_value(std::span<const double> features,
                                       const ActionVector& action) const {
  const auto d = static_cast<Eigen::Index>(state_size_);
  const auto bits = static_cast<Eigen::Index>(action.size());
  Eigen::VectorXd in(d + bits);
  in.head(d) = Eigen::Map<const Eigen::VectorXd>(features.data(), d);
  for (Eigen::Index i = 0; i < bits; ++i) in[d + i] = action.bits()[static_cast<std::size_t>(i)];
  return critic_.forward(in)[0];
}

void WolpertingerAgent::observe(Transition t) {
  t.reward *= config_.reward_scale;
  buffer_.push(std::move(t));
}

WolpertingerAgent::TrainStats WolpertingerAgent::train_step(Rng& rng) {
  const auto batch = buffer_.sample(config_.batch_size, rng);
  return train_step(batch);
}

WolpertingerAgent::TrainStats WolpertingerAgent::train_step(std::span<const Transition> batch) {
  if (batch.empty()) throw std::invalid_argument("WolpertingerAgent::train_step: empty minibatch");
  const auto n = static_cast<Eigen::Index>(batch.size());
  const auto d = static_cast<Eigen::Index>(state_size_);
  const auto bits = static_cast<Eigen::Index>(2 * num_cells_);

  Eigen::MatrixXd states(d, n);
  Eigen::MatrixXd next_states(d, n);
  Eigen::MatrixXd critic_in(d + bits, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = batch[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(t.state.size()) != d ||
        static_cast<Eigen::Index>(t.next_state.size()) != d)
      throw std::invalid_argument("WolpertingerAgent::train_step: wrong state size");
    states.col(i) = Eigen::Map<const Eigen::VectorXd>(t.state.data(), d);
    next_states.col(i) = Eigen::Map<const Eigen::VectorXd>(t.next_state.data(), d);
    critic_in.col(i).head(d) = states.col(i);
    write_bits(critic_in.col(i).tail(bits), t.action);
  }

  // Next action from the target pair, scored by the target critic.
  const Eigen::MatrixXd next_proto = actor_actions(actor_target_, next_states);
  Eigen::MatrixXd next_in(d + bits, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd s = next_states.col(i);
    const Eigen::VectorXd p = next_proto.col(i);
    const std::uint64_t a = select_with(
        critic_target_, std::span<const double>(s.data(), static_cast<std::size_t>(d)),
        std::span<const double>(p.data(), static_cast<std::size_t>(bits)), false);
    next_in.col(i).head(d) = s;
    write_bits(next_in.col(i).tail(bits), a);
  }
  const Eigen::MatrixXd next_q = critic_target_.forward_batch(next_in);

  Mlp::Tape tape;
  const Eigen::MatrixXd q = critic_.forward(critic_in, tape);
  Eigen::MatrixXd upstream(1, n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = batch[static_cast<std::size_t>(i)];
    const double target = t.reward + (t.done ? 0.0 : config_.discount * next_q(0, i));
    const double residual = q(0, i) - target;
    loss += huber(residual, config_.huber_delta);
    upstream(0, i) = huber_grad(residual, config_.huber_delta) / static_cast<double>(n);
  }
  critic_opt_.step(critic_, critic_.backward(tape, upstream));

  TrainStats stats;
  stats.critic_loss = loss / static_cast<double>(n);
  stats.actor_objective = actor_objective(states);
  actor_opt_.step(actor_, [&] {
    MlpGradients g = actor_objective_gradient(states);
    for (auto& w : g.weight) w = -w;
    for (auto& b : g.bias) b = -b;
    return g;
  }());

  actor_target_.soft_update(actor_, config_.tau);
  critic_target_.soft_update(critic_, config_.tau);
  return stats;
}

double WolpertingerAgent::actor_objective(const Eigen::MatrixXd& states) const {
  const Eigen::MatrixXd actions = actor_actions(actor_, states);
  Eigen::MatrixXd in(states.rows() + actions.rows(), states.cols());
  in.topRows(states.rows()) = states;
  in.bottomRows(actions.rows()) = actions;
  return critic_.forward_batch(in).mean();
}

MlpGradients WolpertingerAgent::actor_objective_gradient(const Eigen::MatrixXd& states) const {
  const auto n = states.cols();
  Mlp::Tape actor_tape;
  const Eigen::MatrixXd logits = actor_.forward(states, actor_tape);
  const Eigen::MatrixXd actions = sigmoid(logits);

  Eigen::MatrixXd in(states.rows() + actions.rows(), n);
  in.topRows(states.rows()) = states;
  in.bottomRows(actions.rows()) = actions;
  Mlp::Tape critic_tape;
  critic_.forward(in, critic_tape);
  Eigen::MatrixXd input_grad;
  critic_.backward(critic_tape, Eigen::MatrixXd::Constant(1, n, 1.0 / static_cast<double>(n)),
                   &input_grad);
  const Eigen::MatrixXd dq_da = input_grad.bottomRows(actions.rows());
  const Eigen::MatrixXd dq_dz = (dq_da.array() * actions.array() * (1.0 - actions.array())).matrix();
  return actor_.backward(actor_tape, dq_dz);
}

void WolpertingerAgent::actor_step(
    const Eigen::MatrixXd& states,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>& action_grad) {
  Mlp::Tape tape;
  const Eigen::MatrixXd actions = sigmoid(actor_.forward(states, tape));
  const Eigen::MatrixXd dq_da = action_grad(states, actions);
  const double inv_n = 1.0 / static_cast<double>(states.cols());
  // Minimize -mean Q.
  const Eigen::MatrixXd upstream =
      (-inv_n * dq_da.array() * actions.array() * (1.0 - actions.array())).matrix();
  actor_opt_.step(actor_, actor_.backward(tape, upstream));
}

void WolpertingerAgent::save(std::ostream& out, const CheckpointHeader& header) const {
  write_checkpoint(out, header, {&actor_, &critic_, &actor_target_, &critic_target_});
}

TrainingLog train_wolpertinger(Environment& env, WolpertingerAgent& agent, int episodes,
                               const std::function<std::uint64_t(int)>& episode_seed,
                               const RewardSpec& reward, Rng& rng) {
  TrainingLog log;
  const long total_steps = static_cast<long>(episodes) * env.config().horizon;
  long step = 0;
  for (int e = 0; e < episodes; ++e) {
    env.reset(episode_seed(e));
    double ret = 0.0;
    double loss_sum = 0.0;
    int loss_count = 0;
    while (!env.done()) {
      const std::vector<double> s = env.state().features;
      const double sigma = agent.config().noise.value(step, total_steps);
      const ActionVector a = agent.act(s, sigma, rng);
      const StepOutcome out = env.step(a, reward);
      ret += out.reward;
      agent.observe({s, a.index(), out.reward, out.features, false});
      if (agent.ready()) {
        loss_sum += agent.train_step(rng).critic_loss;
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
