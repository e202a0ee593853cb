#include <cmath>
#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "uavnet/scenario.hpp"

using namespace uavnet;

namespace {

// Axial-coordinate hex grid, written independently of build_layout: every
// site within `rings` of the origin, as a set of (x, y) points.
std::vector<std::pair<double, double>> hex_sites(int rings, double spacing) {
  std::vector<std::pair<double, double>> out;
  for (int q = -rings; q <= rings; ++q)
    for (int r = -rings; r <= rings; ++r) {
      const int s = -q - r;
      if (std::abs(s) > rings) continue;
      out.emplace_back(spacing * (q + r / 2.0), spacing * r * std::sqrt(3.0) / 2.0);
    }
  return out;
}

ScenarioConfig config(int cells) {
  ScenarioConfig c;
  c.num_cells = cells;
  c.rng_seed = 7;
  return c;
}

}  // namespace

TEST_CASE("single cell sits at the origin") {
  const auto layout = build_layout(config(1));
  REQUIRE(layout.size() == 1);
  CHECK(layout[0].x == 0.0);
  CHECK(layout[0].y == 0.0);
  CHECK(layout[0].z == 25.0);
}

TEST_CASE("two cells are one inter-site distance apart") {
  const auto layout = build_layout(config(2));
  CHECK(link_distance(layout[0], layout[1]) == doctest::Approx(2 * 200 * std::cos(std::numbers::pi / 6)).epsilon(1e-12));
  CHECK(link_distance(layout[0], layout[1]) == doctest::Approx(346.41).epsilon(1e-5));
}

TEST_CASE("seven cells: center plus a ring at 60 degree spacing") {
  const auto layout = build_layout(config(7));
  const double isd = 2 * 200 * std::cos(std::numbers::pi / 6);
  REQUIRE(layout.size() == 7);
  CHECK(std::hypot(layout[0].x, layout[0].y) == doctest::Approx(0.0));
  std::vector<double> angles;
  for (int i = 1; i < 7; ++i) {
    CHECK(std::hypot(layout[i].x, layout[i].y) == doctest::Approx(isd).epsilon(1e-12));
    angles.push_back(std::atan2(layout[i].y, layout[i].x));
  }
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 1; i < angles.size(); ++i)
    CHECK(angles[i] - angles[i - 1] == doctest::Approx(std::numbers::pi / 3).epsilon(1e-9));
}

TEST_CASE("layout matches an independent hex-grid generator") {
  const double isd = 2 * 200 * std::cos(std::numbers::pi / 6);
  const auto oracle = hex_sites(2, isd);  // 19 sites
  const auto layout = build_layout(config(19));
  REQUIRE(layout.size() == oracle.size());
  for (const auto& [x, y] : oracle) {
    int hits = 0;
    for (const auto& p : layout)
      if (std::abs(p.x - x) < 1e-6 && std::abs(p.y - y) < 1e-6) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("link distance") {
  CHECK(link_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(link_distance({0, 0, 25}, {0, 0, 125}) == 100.0);
  CHECK(link_distance({3, 4, 0}, {0, 0, 0}) == 5.0);
  CHECK(link_distance({1, 2, 3}, {-4, 0, 9}) == link_distance({-4, 0, 9}, {1, 2, 3}));
}

TEST_CASE("users stay inside their cell and altitude band") {
  auto c = config(7);
  for (auto placement : {UserPlacement::UniformInCell, UserPlacement::CellEdgeBand}) {
    c.placement = placement;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      c.rng_seed = seed;
      const auto s = make_scenario(c);
      REQUIRE(s.num_cells() == 7);
      for (int l = 0; l < 7; ++l) {
        const auto& u = s.user_positions[l];
        const auto& b = s.bs_positions[l];
        const double r = std::hypot(u.x - b.x, u.y - b.y);
        CHECK(r <= 200.0 + 1e-9);
        if (placement == UserPlacement::CellEdgeBand) CHECK(r >= 160.0 - 1e-9);
        CHECK(u.z >= 50.0);
        CHECK(u.z <= 120.0);
        CHECK(s.serving_bs(l) == l);
      }
    }
  }
}

TEST_CASE("uniform placement: mean radial distance is 2R/3") {
  auto c = config(1);
  const auto layout = build_layout(c);
  Rng rng(123);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto s = place_users(c, layout, rng);
    sum += std::hypot(s.user_positions[0].x, s.user_positions[0].y);
  }
  CHECK(sum / n == doctest::Approx(2.0 / 3.0 * 200.0).epsilon(0.01));
}

TEST_CASE("LoS flags follow the configured probability") {
  auto c = config(7);
  c.los_probability = 1.0;
  const auto all = make_scenario(c);
  for (int j = 0; j < 7; ++j)
    for (int l = 0; l < 7; ++l) CHECK(all.los(j, l));

  c.los_probability = 0.8;
  int los = 0, total = 0;
  for (std::uint64_t seed = 0; total < 20000; ++seed) {
    c.rng_seed = seed;
    const auto s = make_scenario(c);
    for (int j = 0; j < 7; ++j)
      for (int l = 0; l < 7; ++l, ++total) los += s.los(j, l) ? 1 : 0;
  }
  CHECK(static_cast<double>(los) / total == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("same seed gives an identical realization") {
  const auto c = config(5);
  CHECK(make_scenario(c) == make_scenario(c));
  auto other = c;
  other.rng_seed = 8;
  CHECK_FALSE(make_scenario(c) == make_scenario(other));
}

TEST_CASE("config validation") {
  auto c = config(1);
  CHECK_NOTHROW(c.validate());
  c.num_cells = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config(1);
  c.cell_radius = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config(1);
  c.user_z_min = 200;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config(1);
  c.los_probability = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_user_placement(to_string(UserPlacement::CellEdgeBand)) == UserPlacement::CellEdgeBand);
  CHECK_THROWS(parse_user_placement("ring"));
}
