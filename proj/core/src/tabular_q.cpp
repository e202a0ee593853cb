#include "uavnet/tabular_q.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavnet {

void TabularConfig::validate() const {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0))
    throw std::invalid_argument("tabular: learning_rate must lie in (0, 1]");
  if (!(discount >= 0.0 && discount < 1.0))
    throw std::invalid_argument("tabular: discount must lie in [0, 1)");
}

QTable::QTable(std::size_t num_actions, TabularConfig config)
    : num_actions_(num_actions), config_(config) {
  if (num_actions_ == 0) throw std::invalid_argument("QTable: num_actions must be > 0");
  config_.validate();
}

double QTable::value(std::uint64_t state, std::size_t action) const {
  const auto it = table_.find(state);
  return it == table_.end() ? 0.0 : it->second.at(action);
}

double QTable::max_value(std::uint64_t state) const {
  const auto it = table_.find(state);
  if (it == table_.end()) return 0.0;
  return *std::max_element(it->second.begin(), it->second.end());
}

std::size_t QTable::greedy(std::uint64_t state) const {
  const auto it = table_.find(state);
  if (it == table_.end()) return 0;
  const auto& row = it->second;
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::size_t QTable::act(std::uint64_t state, double epsilon, Rng& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, num_actions_ - 1);
    return pick(rng);
  }
  return greedy(state);
}

void QTable::update(std::uint64_t state, std::size_t action, double reward,
                    std::uint64_t next_state, bool done) {
  if (action >= num_actions_) throw std::out_of_range("QTable::update: action out of range");
  const double bootstrap = done ? 0.0 : max_value(next_state);
  auto& row = table_.try_emplace(state, num_actions_, 0.0).first->second;
  const double a = config_.learning_rate;
  row[action] = (1.0 - a) * row[action] + a * (reward + config_.discount * bootstrap);
}

std::uint64_t discretize(std::span<const double> features, int bins) {
  if (bins < 1) throw std::invalid_argument("discretize: bins must be >= 1");
  std::uint64_t key = 0;
  for (double f : features) {
    const int level = std::clamp(static_cast<int>(std::floor(f * bins)), 0, bins - 1);
    key = key * static_cast<std::uint64_t>(bins) + static_cast<std::uint64_t>(level);
  }
  return key;
}

}  // namespace uavnet
