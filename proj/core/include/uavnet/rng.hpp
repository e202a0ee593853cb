#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uavnet {

/// Engine used everywhere in the simulator. The engine itself is fully
/// specified by the standard, so raw draws are portable; the std
/// distributions layered on top are implementation-defined, which means
/// bit-identical trajectories are only guaranteed for one standard library.
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of a string.
std::uint64_t fnv1a64(std::string_view text);

/// Seed for the stream owned by one (method, L, seed) cell of a sweep:
/// mix64 folded over master_seed, fnv1a64(label), num_cells and seed.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::string_view label,
                                 std::uint64_t num_cells, std::uint64_t seed);

}  // namespace uavnet
