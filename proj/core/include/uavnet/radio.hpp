#pragma once

#include <span>
#include <vector>

#include "uavnet/channel.hpp"

namespace uavnet {

/// Grid-of-beams codebook of unit-norm analog beamformers.
struct Codebook {
  int antennas = 0;
  std::vector<double> angles;      // pointing azimuth of each codeword
  std::vector<CVector> codewords;  // (1/sqrt(M)) * array_response(angle)

  int size() const { return static_cast<int>(codewords.size()); }
  const CVector& operator[](int i) const { return codewords[static_cast<std::size_t>(i)]; }
};

/// Codeword i points at arcsin(-1 + (2i+1)/size), uniform in sin-space.
/// With size == antennas the codeword matrix is a (phase-shifted) DFT.
Codebook dft_codebook(int antennas, int size);

/// Discrete transmit power levels, 1 dB apart.
struct PowerSet {
  std::vector<double> levels_dbm;

  /// `count` levels ending at max_dbm: max_dbm-count+1, ..., max_dbm.
  static PowerSet uniform(int count, double max_dbm = 30.0);

  int size() const { return static_cast<int>(levels_dbm.size()); }
  double watts(int index) const;
  void validate() const;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double linear_to_db(double ratio);
double db_to_linear(double db);

/// Per-BS power level and beam codeword indices.
struct TxConfig {
  std::vector<int> power_idx;
  std::vector<int> beam_idx;

  int num_cells() const { return static_cast<int>(power_idx.size()); }
  void validate(int num_powers, int num_beams) const;

  friend bool operator==(const TxConfig&, const TxConfig&) = default;
};

struct LinkBudget {
  double signal = 0.0;        // S, watts
  double interference = 0.0;  // I, watts
  double noise = 0.0;         // N, watts
  double sinr = 0.0;
  double snr = 0.0;
  double rate = 0.0;  // log2(1 + sinr), bits/s/Hz
};

struct MeasurementReport {
  double rssi = 0.0;  // S + I + N, watts
  double rsrp = 0.0;  // S, watts
  double rsrq = 0.0;  // rsrp / rssi
  double measured_sinr = 0.0;
};

/// p * |h^H w|^2. Throws std::invalid_argument on a length mismatch.
double received_power(double p_watts, const CVector& h, const CVector& w);

/// Ground-truth link budget of every cell under simultaneous transmission.
std::vector<LinkBudget> sinr_all(const ChannelSet& channels, const TxConfig& tx,
                                 const Codebook& codebook, const PowerSet& powers,
                                 double noise_watts);

/// sum over cells of log2(1 + sinr).
double sum_rate(std::span<const LinkBudget> budgets);

/// Two-phase probing per cell: the UE first measures I+N with its serving BS
/// muted, then S+I+N with every BS on, and derives S by subtraction. Other
/// cells are assumed not to change their transmission between the phases.
std::vector<MeasurementReport> probe_measurements(const ChannelSet& channels, const TxConfig& tx,
                                                  const Codebook& codebook,
                                                  const PowerSet& powers, double noise_watts);

/// Thermal noise -174 dBm/Hz + 10log10(BW) + NF, in watts.
double noise_power_watts(double bandwidth_hz, double noise_figure_db);

/// Cached |h_{j,l}^H w_b|^2 for every (bs j, user l, beam b). Used by the
/// searches that evaluate many configurations on the same channels.
class BeamGainTable {
 public:
  BeamGainTable(const ChannelSet& channels, const Codebook& codebook);

  int num_cells() const { return num_cells_; }
  int num_beams() const { return num_beams_; }
  double operator()(int bs, int user, int beam) const {
    return gains_[(static_cast<std::size_t>(bs) * num_cells_ + user) * num_beams_ + beam];
  }

  /// Best codeword on the link bs -> user, lowest index on ties.
  int best_beam(int bs, int user) const;

 private:
  int num_cells_ = 0;
  int num_beams_ = 0;
  std::vector<double> gains_;
};

/// Same quantities as sinr_all, computed from a gain table and per-BS watts.
void budgets_from_gains(const BeamGainTable& gains, std::span<const double> tx_watts,
                        std::span<const int> beams, double noise_watts,
                        std::span<LinkBudget> out);

}  // namespace uavnet
