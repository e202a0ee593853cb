#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "uavnet/channel.hpp"
#include "uavnet/environment.hpp"
#include "uavnet/radio.hpp"

namespace uavnet {

struct BruteForceResult {
  TxConfig best;
  double best_sum_rate = 0.0;
  std::uint64_t evaluated = 0;
};

/// Raised when (|P|*|W|)^L exceeds the configured cap.
class SearchTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of joint configurations (|P|*|W|)^L, saturating at UINT64_MAX.
std::uint64_t joint_config_count(int num_cells, int num_powers, int num_beams);

/// Exhaustive maximizer of the sum-rate over every joint (power, beam) choice.
/// Configurations are ordered by the tuple (p_0, b_0, p_1, b_1, ...) and the
/// first maximum in that order wins. `threads` > 1 splits the grid into
/// contiguous ranges; the reduction keeps the same tie rule.
BruteForceResult brute_force_search(const ChannelSet& channels, const Codebook& codebook,
                                    const PowerSet& powers, double noise_watts,
                                    std::uint64_t cap = 10'000'000, int threads = 1);

enum class MrtMode { Codebook, Continuous };

std::string_view to_string(MrtMode mode);
MrtMode parse_mrt_mode(std::string_view text);

/// Per cell, the codeword maximizing |h_ll^H w| (lowest index on ties).
std::vector<int> mrt_select(const ChannelSet& channels, const Codebook& codebook);

struct MrtResult {
  double sum_rate = 0.0;
  std::vector<double> snr;    // linear, per cell, at max power
  std::vector<bool> dropped;  // snr <= gamma_min
};

/// Max power, MRT beam, one cell per TDMA slot. Cells whose SNR does not
/// exceed gamma_min are dropped and their slots stay idle, so
/// rate = (1/L) * sum over survivors of log2(1 + snr).
MrtResult mrt_tdma(const ChannelSet& channels, const Codebook& codebook, const PowerSet& powers,
                   double noise_watts, double gamma_min_db, MrtMode mode = MrtMode::Codebook);

double mrt_tdma_sum_rate(const ChannelSet& channels, const Codebook& codebook,
                         const PowerSet& powers, double noise_watts, double gamma_min_db,
                         MrtMode mode = MrtMode::Codebook);

/// Uniform over {0,1}^(2L).
ActionVector random_action(Rng& rng, int num_cells);

}  // namespace uavnet
