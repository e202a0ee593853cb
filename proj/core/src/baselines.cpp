#include "uavnet/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace uavnet {

std::uint64_t joint_config_count(int num_cells, int num_powers, int num_beams) {
  const std::uint64_t per_cell =
      static_cast<std::uint64_t>(num_powers) * static_cast<std::uint64_t>(num_beams);
  std::uint64_t total = 1;
  for (int i = 0; i < num_cells; ++i) {
    if (per_cell != 0 && total > std::numeric_limits<std::uint64_t>::max() / per_cell)
      return std::numeric_limits<std::uint64_t>::max();
    total *= per_cell;
  }
  return total;
}

namespace {

struct RangeBest {
  std::uint64_t index = 0;
  double rate = -std::numeric_limits<double>::infinity();
};

// Digit i (most significant first) of the tuple (p_0, b_0, p_1, b_1, ...).
void decode(std::uint64_t index, int np, int nb, std::vector<int>& p, std::vector<int>& b) {
  const int n = static_cast<int>(p.size());
  for (int cell = n - 1; cell >= 0; --cell) {
    b[static_cast<std::size_t>(cell)] = static_cast<int>(index % static_cast<std::uint64_t>(nb));
    index /= static_cast<std::uint64_t>(nb);
    p[static_cast<std::size_t>(cell)] = static_cast<int>(index % static_cast<std::uint64_t>(np));
    index /= static_cast<std::uint64_t>(np);
  }
}

RangeBest search_range(const BeamGainTable& gains, const PowerSet& powers, double noise,
                       std::uint64_t begin, std::uint64_t end) {
  const int n = gains.num_cells();
  const int np = powers.size();
  const int nb = gains.num_beams();
  std::vector<double> level_watts(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) level_watts[static_cast<std::size_t>(i)] = powers.watts(i);

  std::vector<int> p(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  decode(begin, np, nb, p, b);
  std::vector<double> watts(static_cast<std::size_t>(n));
  std::vector<LinkBudget> budgets(static_cast<std::size_t>(n));
  RangeBest best;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    for (int c = 0; c < n; ++c)
      watts[static_cast<std::size_t>(c)] = level_watts[static_cast<std::size_t>(p[static_cast<std::size_t>(c)])];
    budgets_from_gains(gains, watts, b, noise, budgets);
    const double rate = sum_rate(budgets);
    if (rate > best.rate) {
      best.rate = rate;
      best.index = idx;
    }
    // Odometer increment, least significant digit is the last cell's beam.
    for (int c = n - 1; c >= 0; --c) {
      auto& bc = b[static_cast<std::size_t>(c)];
      if (++bc < nb) break;
      bc = 0;
      auto& pc = p[static_cast<std::size_t>(c)];
      if (++pc < np) break;
      pc = 0;
    }
  }
  return best;
}

}  // namespace

BruteForceResult brute_force_search(const ChannelSet& channels, const Codebook& codebook,
                                    const PowerSet& powers, double noise_watts, std::uint64_t cap,
                                    int threads) {
  const int n = channels.num_cells();
  const int np = powers.size();
  const int nb = codebook.size();
  const std::uint64_t total = joint_config_count(n, np, nb);
  if (total > cap)
    throw SearchTooLarge("brute force needs " + std::to_string(total) +
                         " configurations, cap is " + std::to_string(cap));

  const BeamGainTable gains(channels, codebook);
  const auto workers = static_cast<std::uint64_t>(
      std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(threads, 1)), 1, total));
  std::vector<RangeBest> partial(workers);
  if (workers == 1) {
    partial[0] = search_range(gains, powers, noise_watts, 0, total);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        partial[w] = search_range(gains, powers, noise_watts, begin, end);
      });
    }
  }
  // Ranges are in index order, so a strict comparison keeps the first maximum.
  RangeBest best = partial[0];
  for (std::uint64_t w = 1; w < workers; ++w)
    if (partial[w].rate > best.rate) best = partial[w];

  BruteForceResult out;
  out.best.power_idx.resize(static_cast<std::size_t>(n));
  out.best.beam_idx.resize(static_cast<std::size_t>(n));
  decode(best.index, np, nb, out.best.power_idx, out.best.beam_idx);
  out.best_sum_rate = best.rate;
  out.evaluated = total;
  return out;
}

std::string_view to_string(MrtMode mode) {
  return mode == MrtMode::Codebook ? "codebook" : "continuous";
}

MrtMode parse_mrt_mode(std::string_view text) {
  if (text == "codebook") return MrtMode::Codebook;
  if (text == "continuous") return MrtMode::Continuous;
  throw std::invalid_argument("unknown mrt mode '" + std::string(text) + "'");
}

std::vector<int> mrt_select(const ChannelSet& channels, const Codebook& codebook) {
  const int n = channels.num_cells();
  std::vector<int> beams(static_cast<std::size_t>(n));
  for (int cell = 0; cell < n; ++cell) {
    int best = 0;
    double best_gain = -1.0;
    for (int w = 0; w < codebook.size(); ++w) {
      const double g = std::abs(channels.at(cell, cell).dot(codebook[w]));
      if (g > best_gain) {
        best_gain = g;
        best = w;
      }
    }
    beams[static_cast<std::size_t>(cell)] = best;
  }
  return beams;
}

MrtResult mrt_tdma(const ChannelSet& channels, const Codebook& codebook, const PowerSet& powers,
                   double noise_watts, double gamma_min_db, MrtMode mode) {
  const int n = channels.num_cells();
  const double p = powers.watts(powers.size() - 1);
  const double threshold = db_to_linear(gamma_min_db);
  const std::vector<int> beams = mrt_select(channels, codebook);
  MrtResult out;
  out.snr.resize(static_cast<std::size_t>(n));
  out.dropped.resize(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int cell = 0; cell < n; ++cell) {
    const CVector& h = channels.at(cell, cell);
    // Continuous MRT: w = h / |h| collects the whole channel energy.
    const double gain = mode == MrtMode::Continuous
                            ? h.squaredNorm()
                            : received_power(1.0, h, codebook[beams[static_cast<std::size_t>(cell)]]);
    const double snr = p * gain / noise_watts;
    out.snr[static_cast<std::size_t>(cell)] = snr;
    out.dropped[static_cast<std::size_t>(cell)] = !(snr > threshold);
    if (!out.dropped[static_cast<std::size_t>(cell)]) total += std::log2(1.0 + snr);
  }
  out.sum_rate = total / static_cast<double>(n);
  return out;
}

double mrt_tdma_sum_rate(const ChannelSet& channels, const Codebook& codebook,
                         const PowerSet& powers, double noise_watts, double gamma_min_db,
                         MrtMode mode) {
  return mrt_tdma(channels, codebook, powers, noise_watts, gamma_min_db, mode).sum_rate;
}

ActionVector random_action(Rng& rng, int num_cells) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(2 * num_cells));
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
  }
  return ActionVector(std::move(bits));
}

}  // namespace uavnet
