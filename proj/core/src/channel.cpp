#include "uavnet/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavnet {

void PathLossParams::validate() const {
  if (!(los_exponent > 0.0) || !(nlos_exponent > 0.0))
    throw std::invalid_argument("channel: path-loss exponents must be > 0");
  if (!(los_intercept_db > 0.0) || !(nlos_intercept_db > 0.0))
    throw std::invalid_argument("channel: path-loss intercepts must be > 0 dB");
  if (nlos_paths < 1) throw std::invalid_argument("channel.nlos_paths must be >= 1");
}

CVector array_response(double theta, int antennas) {
  if (antennas < 1) throw std::invalid_argument("array_response: antennas must be >= 1");
  const double phase = std::numbers::pi * std::sin(theta);
  CVector a(antennas);
  for (int m = 0; m < antennas; ++m) a[m] = std::polar(1.0, phase * m);
  return a;
}

double path_loss_db(double distance, bool los, const PathLossParams& params) {
  const double d = std::max(distance, 1.0);
  return los ? params.los_intercept_db + 10.0 * params.los_exponent * std::log10(d)
             : params.nlos_intercept_db + 10.0 * params.nlos_exponent * std::log10(d);
}

double free_space_path_loss_db(double distance, double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("free_space_path_loss_db: wavelength <= 0");
  if (!(distance > 0.0)) throw std::invalid_argument("free_space_path_loss_db: distance <= 0");
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance / wavelength);
}

double azimuth(const Vec3& bs, const Vec3& user) {
  return std::atan2(user.y - bs.y, user.x - bs.x);
}

CVector draw_link_channel(const Vec3& bs, const Vec3& user, bool los, int antennas,
                          const PathLossParams& params, Rng& rng) {
  const double gain = std::pow(10.0, -path_loss_db(link_distance(bs, user), los, params) / 10.0);
  const double amplitude = std::sqrt(gain);
  if (los) return amplitude * array_response(azimuth(bs, user), antennas);

  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> angle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  const int paths = params.nlos_paths;
  CVector h = CVector::Zero(antennas);
  for (int p = 0; p < paths; ++p) {
    const double re = component(rng);
    const double im = component(rng);
    const double theta = angle(rng);
    h += std::complex<double>(re, im) * array_response(theta, antennas);
  }
  return (amplitude / std::sqrt(static_cast<double>(paths))) * h;
}

ChannelSet::ChannelSet(int num_cells, int antennas)
    : num_cells_(num_cells),
      antennas_(antennas),
      h_(static_cast<std::size_t>(num_cells) * static_cast<std::size_t>(num_cells),
         CVector::Zero(antennas)) {
  if (num_cells < 1 || antennas < 1)
    throw std::invalid_argument("ChannelSet: num_cells and antennas must be >= 1");
}

bool operator==(const ChannelSet& a, const ChannelSet& b) {
  if (a.num_cells_ != b.num_cells_ || a.antennas_ != b.antennas_) return false;
  for (std::size_t i = 0; i < a.h_.size(); ++i)
    if (a.h_[i] != b.h_[i]) return false;
  return true;
}

ChannelSet realize_network_channels(const ScenarioRealization& scenario, int antennas,
                                    const PathLossParams& params, Rng& rng) {
  params.validate();
  const int n = scenario.num_cells();
  ChannelSet set(n, antennas);
  for (int bs = 0; bs < n; ++bs) {
    for (int user = 0; user < n; ++user) {
      set.at(bs, user) =
          draw_link_channel(scenario.bs_positions[static_cast<std::size_t>(bs)],
                            scenario.user_positions[static_cast<std::size_t>(user)],
                            scenario.los(bs, user), antennas, params, rng);
    }
  }
  return set;
}

}  // namespace uavnet
