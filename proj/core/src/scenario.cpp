#include "uavnet/scenario.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavnet {

double link_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

std::string_view to_string(UserPlacement placement) {
  switch (placement) {
    case UserPlacement::UniformInCell:
      return "uniform-in-cell";
    case UserPlacement::CellEdgeBand:
      return "cell-edge-band";
  }
  return "?";
}

UserPlacement parse_user_placement(std::string_view text) {
  if (text == "uniform-in-cell") return UserPlacement::UniformInCell;
  if (text == "cell-edge-band") return UserPlacement::CellEdgeBand;
  throw std::invalid_argument("unknown user_placement '" + std::string(text) + "'");
}

void ScenarioConfig::validate() const {
  if (num_cells < 1) throw std::invalid_argument("scenario.num_cells must be >= 1");
  if (!(cell_radius > 0.0)) throw std::invalid_argument("scenario.cell_radius must be > 0");
  if (!(bs_height >= 0.0)) throw std::invalid_argument("scenario.bs_height must be >= 0");
  if (!(user_z_min >= 0.0)) throw std::invalid_argument("scenario.user_z_min must be >= 0");
  if (!(user_z_min <= user_z_max))
    throw std::invalid_argument("scenario.user_z_min must be <= user_z_max");
  if (!(los_probability >= 0.0 && los_probability <= 1.0))
    throw std::invalid_argument("scenario.los_probability must lie in [0, 1]");
}

namespace {

// Axial hex directions ordered by angle: 0, 60, ..., 300 degrees.
constexpr std::array<std::array<int, 2>, 6> kHexDirections{{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

}  // namespace

std::vector<Vec3> build_layout(const ScenarioConfig& config) {
  config.validate();
  const double isd = 2.0 * config.cell_radius * std::cos(std::numbers::pi / 6.0);
  const auto to_cartesian = [&](int q, int r) {
    return Vec3{isd * (q + 0.5 * r), isd * (std::sqrt(3.0) / 2.0) * r, config.bs_height};
  };

  std::vector<Vec3> sites;
  sites.reserve(static_cast<std::size_t>(config.num_cells));
  sites.push_back(to_cartesian(0, 0));
  for (int ring = 1; static_cast<int>(sites.size()) < config.num_cells; ++ring) {
    int q = kHexDirections[0][0] * ring;
    int r = kHexDirections[0][1] * ring;
    for (int side = 0; side < 6; ++side) {
      const auto& step = kHexDirections[(side + 2) % 6];
      for (int k = 0; k < ring; ++k) {
        if (static_cast<int>(sites.size()) == config.num_cells) return sites;
        sites.push_back(to_cartesian(q, r));
        q += step[0];
        r += step[1];
      }
    }
  }
  return sites;
}

ScenarioRealization place_users(const ScenarioConfig& config, std::span<const Vec3> layout,
                                Rng& rng) {
  config.validate();
  const int n = config.num_cells;
  if (static_cast<int>(layout.size()) != n)
    throw std::invalid_argument("place_users: layout size does not match num_cells");

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> altitude(config.user_z_min, config.user_z_max);
  std::bernoulli_distribution los(config.los_probability);

  ScenarioRealization out;
  out.bs_positions.assign(layout.begin(), layout.end());
  out.user_positions.reserve(static_cast<std::size_t>(n));
  for (int cell = 0; cell < n; ++cell) {
    double radius = 0.0;
    if (config.placement == UserPlacement::UniformInCell) {
      radius = config.cell_radius * std::sqrt(unit(rng));
    } else {
      radius = config.cell_radius * (0.8 + 0.2 * unit(rng));
    }
    const double phi = angle(rng);
    const double z = config.user_z_min == config.user_z_max ? config.user_z_min : altitude(rng);
    const Vec3& bs = layout[static_cast<std::size_t>(cell)];
    out.user_positions.push_back({bs.x + radius * std::cos(phi), bs.y + radius * std::sin(phi), z});
  }

  out.los = LinkFlags(n);
  for (int bs = 0; bs < n; ++bs)
    for (int user = 0; user < n; ++user) out.los.set(bs, user, los(rng));
  return out;
}

ScenarioRealization make_scenario(const ScenarioConfig& config) {
  Rng rng(config.rng_seed);
  const auto layout = build_layout(config);
  return place_users(config, layout, rng);
}

}  // namespace uavnet
