#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Euclidean 3D distance in meters.
double link_distance(const Vec3& a, const Vec3& b);

enum class UserPlacement { UniformInCell, CellEdgeBand };

std::string_view to_string(UserPlacement placement);
UserPlacement parse_user_placement(std::string_view text);

struct ScenarioConfig {
  int num_cells = 1;
  double cell_radius = 200.0;
  double bs_height = 25.0;
  double user_z_min = 50.0;
  double user_z_max = 120.0;
  UserPlacement placement = UserPlacement::UniformInCell;
  double los_probability = 0.8;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

/// Row-major L x L boolean matrix indexed (bs, user).
class LinkFlags {
 public:
  LinkFlags() = default;
  explicit LinkFlags(int n) : n_(n), flags_(static_cast<std::size_t>(n) * n, 0) {}

  int size() const { return n_; }
  bool operator()(int bs, int user) const { return flags_[index(bs, user)] != 0; }
  void set(int bs, int user, bool v) { flags_[index(bs, user)] = v ? 1 : 0; }

  friend bool operator==(const LinkFlags&, const LinkFlags&) = default;

 private:
  std::size_t index(int bs, int user) const {
    return static_cast<std::size_t>(bs) * n_ + user;
  }
  int n_ = 0;
  std::vector<unsigned char> flags_;
};

/// One drop of the network: L base stations, one scheduled user per cell.
/// User l is served by BS l.
struct ScenarioRealization {
  std::vector<Vec3> bs_positions;
  std::vector<Vec3> user_positions;
  LinkFlags los;

  int num_cells() const { return static_cast<int>(bs_positions.size()); }
  int serving_bs(int user) const { return user; }

  friend bool operator==(const ScenarioRealization&, const ScenarioRealization&) = default;
};

/// Hexagonal-packing layout in spiral ring order (center first, then ring 1
/// counter-clockwise from +x, ...). Inter-site distance 2*R*cos(30 deg).
std::vector<Vec3> build_layout(const ScenarioConfig& config);

/// Places one user per cell and draws the per-link LoS flags.
ScenarioRealization place_users(const ScenarioConfig& config, std::span<const Vec3> layout,
                                Rng& rng);

/// build_layout + place_users with an engine seeded from config.rng_seed.
ScenarioRealization make_scenario(const ScenarioConfig& config);

}  // namespace uavnet
