#include "uavnet/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace uavnet {

namespace {

double corner_distance2(std::span<const double> proto, std::uint64_t corner) {
  double d = 0.0;
  for (std::size_t i = 0; i < proto.size(); ++i) {
    const double bit = static_cast<double>((corner >> i) & 1U);
    d += (proto[i] - bit) * (proto[i] - bit);
  }
  return d;
}

void check_args(std::span<const double> proto, std::size_t k) {
  if (proto.empty() || proto.size() >= 64)
    throw std::invalid_argument("knn: proto dimension must be in [1, 63]");
  const std::uint64_t total = std::uint64_t{1} << proto.size();
  if (k < 1 || k > total) throw std::invalid_argument("knn: k must be in [1, 2^n]");
}

struct Ranked {
  double distance;
  std::uint64_t index;
  bool operator<(const Ranked& o) const {
    return distance != o.distance ? distance < o.distance : index < o.index;
  }
};

}  // namespace

std::vector<std::uint64_t> knn_corners_enumerate(std::span<const double> proto, std::size_t k) {
  check_args(proto, k);
  if (proto.size() > 24) throw std::invalid_argument("knn_corners_enumerate: dimension too large");
  const std::uint64_t total = std::uint64_t{1} << proto.size();
  std::vector<Ranked> all;
  all.reserve(total);
  for (std::uint64_t c = 0; c < total; ++c) all.push_back({corner_distance2(proto, c), c});
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].index);
  return out;
}

std::vector<std::uint64_t> knn_corners_best_first(std::span<const double> proto, std::size_t k) {
  check_args(proto, k);
  const std::size_t n = proto.size();

  // Nearest corner; exact halves round to 0 (the lower index).
  std::uint64_t base = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (proto[i] > 0.5) base |= std::uint64_t{1} << i;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> cost(n);
  for (std::size_t i = 0; i < n; ++i) cost[i] = std::abs(1.0 - 2.0 * proto[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });

  // Flip sets over sorted positions, generated in nondecreasing total cost:
  // from (set ending at j) go to set + {j+1} and to set - {j} + {j+1}.
  struct Node {
    double sum;
    std::uint64_t mask;  // over sorted positions
    std::size_t last;
    bool operator>(const Node& o) const { return sum > o.sum; }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;

  const auto corner_of = [&](std::uint64_t mask) {
    std::uint64_t c = base;
    for (std::size_t j = 0; j < n; ++j)
      if ((mask >> j) & 1U) c ^= std::uint64_t{1} << order[j];
    return c;
  };

  std::vector<Ranked> found;
  found.push_back({corner_distance2(proto, base), base});
  heap.push({cost[order[0]], 1U, 0});
  constexpr double kTieSlack = 1e-9;
  double kth_sum = found.size() >= k ? 0.0 : -1.0;
  while (!heap.empty()) {
    const Node node = heap.top();
    if (kth_sum >= 0.0 && node.sum > kth_sum + kTieSlack) break;
    heap.pop();
    const std::uint64_t c = corner_of(node.mask);
    found.push_back({corner_distance2(proto, c), c});
    if (kth_sum < 0.0 && found.size() >= k) kth_sum = node.sum;
    if (node.last + 1 < n) {
      const double next = cost[order[node.last + 1]];
      heap.push({node.sum + next, node.mask | (std::uint64_t{1} << (node.last + 1)), node.last + 1});
      heap.push({node.sum - cost[order[node.last]] + next,
                 (node.mask & ~(std::uint64_t{1} << node.last)) | (std::uint64_t{1} << (node.last + 1)),
                 node.last + 1});
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(found[i].index);
  return out;
}

std::vector<std::uint64_t> knn_corner_indices(std::span<const double> proto, std::size_t k) {
  if (proto.size() <= 16) return knn_corners_enumerate(proto, k);
  return knn_corners_best_first(proto, k);
}

std::vector<ActionVector> knn_actions(std::span<const double> proto, std::size_t k) {
  if (proto.size() % 2 != 0) throw std::invalid_argument("knn_actions: proto length must be 2L");
  const int cells = static_cast<int>(proto.size() / 2);
  std::vector<ActionVector> out;
  for (auto idx : knn_corner_indices(proto, k)) out.push_back(ActionVector::from_index(idx, cells));
  return out;
}

}  // namespace uavnet
