#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavnet/environment.hpp"

namespace uavnet {

/// The k corners of {0,1}^n nearest to `proto` in Euclidean distance, ordered
/// by (distance, binary index). n = proto.size() must be < 64.
///
/// Small n (<= 16, i.e. L <= 8) enumerates all corners. Larger n walks the
/// flip sets of the rounded corner in nondecreasing extra distance with a
/// heap; flipping bit i costs |1 - 2 proto_i|, so this is also exact.
std::vector<std::uint64_t> knn_corner_indices(std::span<const double> proto, std::size_t k);

/// Reference implementations behind knn_corner_indices, exposed for tests.
std::vector<std::uint64_t> knn_corners_enumerate(std::span<const double> proto, std::size_t k);
std::vector<std::uint64_t> knn_corners_best_first(std::span<const double> proto, std::size_t k);

/// knn_corner_indices mapped to joint actions; proto has 2L entries.
std::vector<ActionVector> knn_actions(std::span<const double> proto, std::size_t k);

}  // namespace uavnet
