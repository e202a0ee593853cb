#include "uavnet/replay_buffer.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <stdexcept>

namespace uavnet {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
}

ReplayBuffer::ReplayBuffer(const ReplayBuffer& other) : capacity_(other.capacity_) {
  std::lock_guard lock(other.mutex_);
  items_ = other.items_;
}

ReplayBuffer& ReplayBuffer::operator=(const ReplayBuffer& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  capacity_ = other.capacity_;
  items_ = other.items_;
  return *this;
}

void ReplayBuffer::push(Transition t) {
  std::lock_guard lock(mutex_);
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(t));
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard lock(mutex_);
  return items_.size();
}

std::vector<Transition> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  std::lock_guard lock(mutex_);
  if (count > items_.size())
    throw std::invalid_argument("ReplayBuffer::sample: not enough transitions");
  // Partial Fisher-Yates over indices; only displaced slots are stored, so the
  // cost is O(count) rather than O(size) for the same draws.
  std::unordered_map<std::size_t, std::size_t> displaced;
  const auto at = [&](std::size_t j) {
    const auto it = displaced.find(j);
    return it == displaced.end() ? j : it->second;
  };
  std::vector<Transition> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items_.size() - 1);
    const std::size_t j = pick(rng);
    const std::size_t chosen = at(j);
    displaced[j] = at(i);
    out.push_back(items_[chosen]);
  }
  return out;
}

std::vector<Transition> ReplayBuffer::snapshot() const {
  std::lock_guard lock(mutex_);
  return {items_.begin(), items_.end()};
}

}  // namespace uavnet
