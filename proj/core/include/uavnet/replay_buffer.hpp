#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet {

struct Transition {
  std::vector<double> state;
  std::uint64_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

/// Fixed-capacity FIFO of transitions. push() and sample() lock the same
/// mutex, so producers on other threads may feed a training loop.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  ReplayBuffer(const ReplayBuffer& other);
  ReplayBuffer& operator=(const ReplayBuffer& other);

  void push(Transition t);
  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }

  /// `count` distinct transitions drawn uniformly (without replacement).
  std::vector<Transition> sample(std::size_t count, Rng& rng) const;

  /// Contents from oldest to newest.
  std::vector<Transition> snapshot() const;

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::deque<Transition> items_;
};

}  // namespace uavnet
