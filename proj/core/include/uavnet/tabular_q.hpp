#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet {

struct TabularConfig {
  double learning_rate = 0.1;  // alpha in (0, 1]
  double discount = 0.9;       // in [0, 1)

  void validate() const;
};

/// Sparse Q table keyed by a discretized state. Unvisited entries read as 0.
class QTable {
 public:
  QTable(std::size_t num_actions, TabularConfig config);

  double value(std::uint64_t state, std::size_t action) const;
  double max_value(std::uint64_t state) const;
  /// Lowest index among maximizers.
  std::size_t greedy(std::uint64_t state) const;
  std::size_t act(std::uint64_t state, double epsilon, Rng& rng) const;

  /// Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + discount * max_a' Q(s',a') * (1 - done)).
  void update(std::uint64_t state, std::size_t action, double reward, std::uint64_t next_state,
              bool done);

  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_states() const { return table_.size(); }
  const TabularConfig& config() const { return config_; }

 private:
  std::size_t num_actions_;
  TabularConfig config_;
  std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

/// Mixed-radix key of features in [0,1] quantized to `bins` levels each.
std::uint64_t discretize(std::span<const double> features, int bins);

}  // namespace uavnet
