#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "uavnet/rng.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

using CVector = Eigen::VectorXcd;

/// Log-distance path loss for the two air-to-ground propagation states.
/// Defaults are a 28 GHz calibration.
struct PathLossParams {
  double los_intercept_db = 61.4;
  double los_exponent = 2.0;
  double nlos_intercept_db = 72.0;
  double nlos_exponent = 2.92;
  int nlos_paths = 3;

  void validate() const;
};

/// Half-wavelength ULA steering vector, entry m = exp(i*pi*m*sin(theta)).
CVector array_response(double theta, int antennas);

/// intercept + 10*exponent*log10(max(d, 1 m)).
double path_loss_db(double distance, bool los, const PathLossParams& params);

/// 20*log10(4*pi*d/lambda), for air-to-air links. Not clamped; throws for d <= 0.
double free_space_path_loss_db(double distance, double wavelength);

/// Azimuth of `user` seen from the array at `bs` (broadside along +x).
double azimuth(const Vec3& bs, const Vec3& user);

/// Geometric channel sqrt(g) * sum_p alpha_p / sqrt(Np) * a(theta_p).
/// LoS: one deterministic path at the true azimuth. NLoS: nlos_paths paths
/// with CN(0,1) gains and azimuths uniform on (-pi/2, pi/2).
CVector draw_link_channel(const Vec3& bs, const Vec3& user, bool los, int antennas,
                          const PathLossParams& params, Rng& rng);

/// L x L channel vectors; at(bs, user) is BS `bs`'s array to `user`'s antenna.
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(int num_cells, int antennas);

  int num_cells() const { return num_cells_; }
  int antennas() const { return antennas_; }

  const CVector& at(int bs, int user) const { return h_[index(bs, user)]; }
  CVector& at(int bs, int user) { return h_[index(bs, user)]; }

  friend bool operator==(const ChannelSet& a, const ChannelSet& b);

 private:
  std::size_t index(int bs, int user) const {
    return static_cast<std::size_t>(bs) * static_cast<std::size_t>(num_cells_) +
           static_cast<std::size_t>(user);
  }
  int num_cells_ = 0;
  int antennas_ = 0;
  std::vector<CVector> h_;
};

/// Draws all L^2 links (row-major over (bs, user)) using the scenario's LoS flags.
ChannelSet realize_network_channels(const ScenarioRealization& scenario, int antennas,
                                    const PathLossParams& params, Rng& rng);

}  // namespace uavnet
