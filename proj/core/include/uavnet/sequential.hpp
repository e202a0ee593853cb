#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "uavnet/dqn.hpp"
#include "uavnet/environment.hpp"
#include "uavnet/rng.hpp"

namespace uavnet {

/// Per-cell action space: {power down, up} x {beam down, up}.
/// Index bit 0 is the power step, bit 1 the beam step.
inline constexpr int kCellActions = 4;

enum class OrderMetric { Rsrq, Distance };

std::string_view to_string(OrderMetric metric);
OrderMetric parse_order_metric(std::string_view text);

struct SequentialConfig {
  DqnConfig agent{};
  int episodes_per_agent = 150;
  OrderMetric order_metric = OrderMetric::Rsrq;
  /// Weight on interference inflicted on already-trained cells, in units of
  /// the noise power.
  double interference_weight = 1.0;
  int order_probe_episodes = 8;

  void validate() const;
};

/// One small Q-network per cell; each picks its own two bits.
class SequentialPolicy {
 public:
  SequentialPolicy(std::vector<int> order, std::vector<DqnAgent> agents);

  int num_cells() const { return static_cast<int>(agents_.size()); }
  const std::vector<int>& order() const { return order_; }
  const DqnAgent& agent(int cell) const { return agents_[static_cast<std::size_t>(cell)]; }

  std::size_t cell_action(int cell, std::span<const double> features) const;
  ActionVector act(std::span<const double> features) const;

  /// Q values computed across all cell agents since the last reset (4 per agent per decision).
  std::uint64_t action_evaluations() const;
  void reset_counters();

 private:
  std::vector<int> order_;
  std::vector<DqnAgent> agents_;
};

/// Cells sorted from most to least interfered, ties by cell index. Rsrq: mean
/// RSRQ at the initial configuration, ascending. Distance: mean distance from
/// the user to its nearest non-serving BS, ascending.
std::vector<int> interference_order(Environment& env, OrderMetric metric,
                                    std::span<const std::uint64_t> probe_seeds);

/// Training reward of `cell`: log2(1 + sinr) of its own user minus
/// weight * (interference it puts on the users of `trained` cells) / noise.
double cell_training_reward(const Environment& env, int cell, std::span<const int> trained,
                            double interference_weight);

/// Agent for cell c is initialised from derive_stream_seed(seed, "cell-agent", L, c);
/// the shared exploration/sampling engine is Rng(seed).
std::uint64_t cell_agent_seed(std::uint64_t seed, int num_cells, int cell);

/// Trains the cell agents one after another in interference order. While cell
/// order[i] learns, cells order[0..i) act greedily with their frozen agents and
/// the remaining cells keep their initial configuration. Episode e of the
/// i-th agent resets with episode_seed(i * episodes_per_agent + e).
SequentialPolicy sequential_train(Environment& env, const SequentialConfig& config,
                                  const std::function<std::uint64_t(int)>& episode_seed,
                                  std::span<const std::uint64_t> probe_seeds, std::uint64_t seed);

}  // namespace uavnet
