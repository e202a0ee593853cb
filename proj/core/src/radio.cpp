#include "uavnet/radio.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavnet {

Codebook dft_codebook(int antennas, int size) {
  if (antennas < 1 || size < 1)
    throw std::invalid_argument("dft_codebook: antennas and size must be >= 1");
  Codebook cb;
  cb.antennas = antennas;
  const double scale = 1.0 / std::sqrt(static_cast<double>(antennas));
  for (int i = 0; i < size; ++i) {
    const double theta = std::asin(-1.0 + (2.0 * i + 1.0) / size);
    cb.angles.push_back(theta);
    cb.codewords.push_back(scale * array_response(theta, antennas));
  }
  return cb;
}

PowerSet PowerSet::uniform(int count, double max_dbm) {
  if (count < 1) throw std::invalid_argument("PowerSet: need at least one level");
  PowerSet set;
  for (int i = 0; i < count; ++i) set.levels_dbm.push_back(max_dbm - (count - 1) + i);
  return set;
}

double PowerSet::watts(int index) const {
  return dbm_to_watts(levels_dbm.at(static_cast<std::size_t>(index)));
}

void PowerSet::validate() const {
  if (levels_dbm.empty()) throw std::invalid_argument("PowerSet: empty");
  for (std::size_t i = 1; i < levels_dbm.size(); ++i) {
    if (std::abs(levels_dbm[i] - levels_dbm[i - 1] - 1.0) > 1e-9)
      throw std::invalid_argument("PowerSet: levels must increase in 1 dB steps");
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void TxConfig::validate(int num_powers, int num_beams) const {
  if (power_idx.size() != beam_idx.size())
    throw std::invalid_argument("TxConfig: power and beam index lists differ in length");
  for (std::size_t i = 0; i < power_idx.size(); ++i) {
    if (power_idx[i] < 0 || power_idx[i] >= num_powers)
      throw std::out_of_range("TxConfig: power index out of range");
    if (beam_idx[i] < 0 || beam_idx[i] >= num_beams)
      throw std::out_of_range("TxConfig: beam index out of range");
  }
}

double received_power(double p_watts, const CVector& h, const CVector& w) {
  if (h.size() != w.size())
    throw std::invalid_argument("received_power: channel and codeword lengths differ");
  return p_watts * std::norm(h.dot(w));
}

std::vector<LinkBudget> sinr_all(const ChannelSet& channels, const TxConfig& tx,
                                 const Codebook& codebook, const PowerSet& powers,
                                 double noise_watts) {
  const int n = channels.num_cells();
  if (tx.num_cells() != n) throw std::invalid_argument("sinr_all: TxConfig size != num_cells");
  tx.validate(powers.size(), codebook.size());

  std::vector<LinkBudget> out(static_cast<std::size_t>(n));
  for (int user = 0; user < n; ++user) {
    LinkBudget& b = out[static_cast<std::size_t>(user)];
    b.noise = noise_watts;
    for (int bs = 0; bs < n; ++bs) {
      const double p = received_power(powers.watts(tx.power_idx[static_cast<std::size_t>(bs)]),
                                      channels.at(bs, user),
                                      codebook[tx.beam_idx[static_cast<std::size_t>(bs)]]);
      if (bs == user) {
        b.signal = p;
      } else {
        b.interference += p;
      }
    }
    b.sinr = b.signal / (b.interference + b.noise);
    b.snr = b.signal / b.noise;
    b.rate = std::log2(1.0 + b.sinr);
  }
  return out;
}

double sum_rate(std::span<const LinkBudget> budgets) {
  double total = 0.0;
  for (const auto& b : budgets) total += std::log2(1.0 + b.sinr);
  return total;
}

namespace {

// Power received by `user` from every BS except `muted_bs` (-1 for none), plus noise.
double measure_total_power(const ChannelSet& channels, const TxConfig& tx,
                           const Codebook& codebook, const PowerSet& powers, double noise_watts,
                           int user, int muted_bs) {
  double total = noise_watts;
  for (int bs = 0; bs < channels.num_cells(); ++bs) {
    if (bs == muted_bs) continue;
    total += received_power(powers.watts(tx.power_idx[static_cast<std::size_t>(bs)]),
                            channels.at(bs, user),
                            codebook[tx.beam_idx[static_cast<std::size_t>(bs)]]);
  }
  return total;
}

}  // namespace

std::vector<MeasurementReport> probe_measurements(const ChannelSet& channels, const TxConfig& tx,
                                                  const Codebook& codebook,
                                                  const PowerSet& powers, double noise_watts) {
  const int n = channels.num_cells();
  if (tx.num_cells() != n)
    throw std::invalid_argument("probe_measurements: TxConfig size != num_cells");
  tx.validate(powers.size(), codebook.size());

  std::vector<MeasurementReport> out(static_cast<std::size_t>(n));
  for (int cell = 0; cell < n; ++cell) {
    const double interference_plus_noise =
        measure_total_power(channels, tx, codebook, powers, noise_watts, cell, cell);
    const double total = measure_total_power(channels, tx, codebook, powers, noise_watts, cell, -1);
    const double signal = std::max(total - interference_plus_noise, 0.0);
    MeasurementReport& r = out[static_cast<std::size_t>(cell)];
    r.rssi = total;
    r.rsrp = signal;
    r.rsrq = signal / total;
    r.measured_sinr = signal / interference_plus_noise;
  }
  return out;
}

double noise_power_watts(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("noise_power_watts: bandwidth <= 0");
  return dbm_to_watts(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

BeamGainTable::BeamGainTable(const ChannelSet& channels, const Codebook& codebook)
    : num_cells_(channels.num_cells()), num_beams_(codebook.size()) {
  gains_.resize(static_cast<std::size_t>(num_cells_) * num_cells_ * num_beams_);
  for (int bs = 0; bs < num_cells_; ++bs)
    for (int user = 0; user < num_cells_; ++user)
      for (int beam = 0; beam < num_beams_; ++beam)
        gains_[(static_cast<std::size_t>(bs) * num_cells_ + user) * num_beams_ + beam] =
            received_power(1.0, channels.at(bs, user), codebook[beam]);
}

int BeamGainTable::best_beam(int bs, int user) const {
  int best = 0;
  for (int beam = 1; beam < num_beams_; ++beam)
    if ((*this)(bs, user, beam) > (*this)(bs, user, best)) best = beam;
  return best;
}

void budgets_from_gains(const BeamGainTable& gains, std::span<const double> tx_watts,
                        std::span<const int> beams, double noise_watts,
                        std::span<LinkBudget> out) {
  const int n = gains.num_cells();
  for (int user = 0; user < n; ++user) {
    LinkBudget& b = out[static_cast<std::size_t>(user)];
    b.noise = noise_watts;
    b.interference = 0.0;
    for (int bs = 0; bs < n; ++bs) {
      const double p = tx_watts[static_cast<std::size_t>(bs)] *
                       gains(bs, user, beams[static_cast<std::size_t>(bs)]);
      if (bs == user) {
        b.signal = p;
      } else {
        b.interference += p;
      }
    }
    b.sinr = b.signal / (b.interference + b.noise);
    b.snr = b.signal / b.noise;
    b.rate = std::log2(1.0 + b.sinr);
  }
}

}  // namespace uavnet
