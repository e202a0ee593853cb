#include "uavnet/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace uavnet {

std::string_view to_string(OrderMetric metric) {
  return metric == OrderMetric::Rsrq ? "rsrq" : "distance";
}

OrderMetric parse_order_metric(std::string_view text) {
  if (text == "rsrq") return OrderMetric::Rsrq;
  if (text == "distance") return OrderMetric::Distance;
  throw std::invalid_argument("unknown order metric '" + std::string(text) + "'");
}

void SequentialConfig::validate() const {
  agent.validate();
  if (episodes_per_agent < 1) throw std::invalid_argument("sequential.episodes_per_agent must be >= 1");
  if (!(interference_weight >= 0.0))
    throw std::invalid_argument("sequential.interference_weight must be >= 0");
  if (order_probe_episodes < 1)
    throw std::invalid_argument("sequential.order_probe_episodes must be >= 1");
}

SequentialPolicy::SequentialPolicy(std::vector<int> order, std::vector<DqnAgent> agents)
    : order_(std::move(order)), agents_(std::move(agents)) {
  if (order_.size() != agents_.size())
    throw std::invalid_argument("SequentialPolicy: order and agents differ in size");
  for (const auto& a : agents_)
    if (a.num_actions() != kCellActions)
      throw std::invalid_argument("SequentialPolicy: cell agents need 4 outputs");
}

std::size_t SequentialPolicy::cell_action(int cell, std::span<const double> features) const {
  return agent(cell).greedy_action(features);
}

ActionVector SequentialPolicy::act(std::span<const double> features) const {
  const int n = num_cells();
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(2 * n));
  for (int cell = 0; cell < n; ++cell) {
    const std::size_t a = cell_action(cell, features);
    bits[static_cast<std::size_t>(cell)] = static_cast<std::uint8_t>(a & 1U);
    bits[static_cast<std::size_t>(n + cell)] = static_cast<std::uint8_t>((a >> 1) & 1U);
  }
  return ActionVector(std::move(bits));
}

std::uint64_t SequentialPolicy::action_evaluations() const {
  std::uint64_t total = 0;
  for (const auto& a : agents_) total += a.q_evaluations();
  return total;
}

void SequentialPolicy::reset_counters() {
  for (auto& a : agents_) a.reset_counters();
}

std::vector<int> interference_order(Environment& env, OrderMetric metric,
                                    std::span<const std::uint64_t> probe_seeds) {
  const int n = env.num_cells();
  if (probe_seeds.empty()) throw std::invalid_argument("interference_order: no probe seeds");
  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  for (std::uint64_t s : probe_seeds) {
    const EnvState& st = env.reset(s);
    if (metric == OrderMetric::Rsrq) {
      const auto m = probe_measurements(st.channels, st.tx, env.codebook(), env.powers(),
                                        env.noise_watts());
      for (int c = 0; c < n; ++c) score[static_cast<std::size_t>(c)] += m[static_cast<std::size_t>(c)].rsrq;
    } else {
      for (int c = 0; c < n; ++c) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
          if (j == c) continue;
          nearest = std::min(nearest, link_distance(st.scenario.user_positions[static_cast<std::size_t>(c)],
                                                    st.scenario.bs_positions[static_cast<std::size_t>(j)]));
        }
        score[static_cast<std::size_t>(c)] += std::isfinite(nearest) ? nearest : 0.0;
      }
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return score[static_cast<std::size_t>(a)] < score[static_cast<std::size_t>(b)];
  });
  return order;
}

double cell_training_reward(const Environment& env, int cell, std::span<const int> trained,
                            double interference_weight) {
  const auto& st = env.state();
  const auto budgets = env.budgets_for(st.tx);
  double reward = budgets[static_cast<std::size_t>(cell)].rate;
  if (trained.empty() || interference_weight == 0.0) return reward;
  const double p = env.powers().watts(st.tx.power_idx[static_cast<std::size_t>(cell)]);
  const CVector& w = env.codebook()[st.tx.beam_idx[static_cast<std::size_t>(cell)]];
  double inflicted = 0.0;
  for (int victim : trained) inflicted += received_power(p, st.channels.at(cell, victim), w);
  return reward - interference_weight * inflicted / env.noise_watts();
}

std::uint64_t cell_agent_seed(std::uint64_t seed, int num_cells, int cell) {
  return derive_stream_seed(seed, "cell-agent", static_cast<std::uint64_t>(num_cells),
                            static_cast<std::uint64_t>(cell));
}

SequentialPolicy sequential_train(Environment& env, const SequentialConfig& config,
                                  const std::function<std::uint64_t(int)>& episode_seed,
                                  std::span<const std::uint64_t> probe_seeds, std::uint64_t seed) {
  config.validate();
  const int n = env.num_cells();
  const std::vector<int> order = interference_order(env, config.order_metric, probe_seeds);

  std::vector<DqnAgent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int cell = 0; cell < n; ++cell)
    agents.emplace_back(env.feature_size(), kCellActions, config.agent, cell_agent_seed(seed, n, cell));

  Rng rng(seed);
  const int np = env.powers().size();
  const int nb = env.codebook().size();
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int cell = order[pos];
    const std::vector<int> trained(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pos));

    StepModel model;
    model.next_tx = [&](const Environment& e, std::size_t action) {
      TxConfig tx = e.state().tx;
      const auto& f = e.state().features;
      for (int t : trained) {
        const std::size_t a = agents[static_cast<std::size_t>(t)].greedy_action(f);
        apply_cell_step(tx, t, (a & 1U) != 0, (a & 2U) != 0, np, nb);
      }
      apply_cell_step(tx, cell, (action & 1U) != 0, (action & 2U) != 0, np, nb);
      return tx;
    };
    model.reward = [&](const Environment& e, const StepOutcome&) {
      return cell_training_reward(e, cell, trained, config.interference_weight);
    };
    const int offset = static_cast<int>(pos) * config.episodes_per_agent;
    train_dqn(env, agents[static_cast<std::size_t>(cell)], config.episodes_per_agent,
              [&](int e) { return episode_seed(offset + e); }, model, rng);
  }
  for (auto& a : agents) a.reset_counters();
  return SequentialPolicy(order, std::move(agents));
}

}  // namespace uavnet
