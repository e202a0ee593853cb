#include <cmath>
#include <numbers>

#include "doctest.h"
#include "uavnet/channel.hpp"

using namespace uavnet;

TEST_CASE("array response") {
  const auto a1 = array_response(0.7, 1);
  REQUIRE(a1.size() == 1);
  CHECK(std::abs(a1(0) - std::complex<double>(1, 0)) < 1e-15);

  const auto broadside = array_response(0.0, 2);
  CHECK(std::abs(broadside(0) - 1.0) < 1e-15);
  CHECK(std::abs(broadside(1) - 1.0) < 1e-15);

  const auto endfire = array_response(std::numbers::pi / 2, 2);
  CHECK(std::abs(endfire(1) - std::complex<double>(-1, 0)) < 1e-12);

  const auto a = array_response(-0.3, 16);
  for (int m = 0; m < 16; ++m) {
    CHECK(std::abs(a(m)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::arg(a(m) * std::conj(std::polar(1.0, std::numbers::pi * m * std::sin(-0.3)))) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("statistical path loss") {
  const PathLossParams p;
  CHECK(path_loss_db(1.0, true, p) == doctest::Approx(61.4));
  CHECK(path_loss_db(100.0, true, p) == doctest::Approx(101.4));
  CHECK(path_loss_db(100.0, false, p) > path_loss_db(100.0, true, p));
  CHECK(path_loss_db(100.0, false, p) == doctest::Approx(72.0 + 29.2 * 2.0));
  // Clamped below 1 m.
  CHECK(path_loss_db(0.2, true, p) == path_loss_db(1.0, true, p));
  double prev = path_loss_db(1.0, false, p);
  for (double d = 1.5; d < 2000; d *= 1.3) {
    const double cur = path_loss_db(d, false, p);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("free-space path loss") {
  const double lambda = 0.0107;
  CHECK(free_space_path_loss_db(lambda / (4 * std::numbers::pi), lambda) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(free_space_path_loss_db(200.0, lambda) - free_space_path_loss_db(100.0, lambda) ==
        doctest::Approx(20 * std::log10(2.0)).epsilon(1e-12));
  // 20*log10(4*pi*100/0.0107) = 20*log10(117437.6) = 101.397 dB.
  CHECK(free_space_path_loss_db(100.0, lambda) == doctest::Approx(101.397).epsilon(1e-5));
  CHECK_THROWS(free_space_path_loss_db(0.0, lambda));
}

TEST_CASE("LoS channel has exact power calibration") {
  const PathLossParams p;
  Rng rng(1);
  const Vec3 bs{0, 0, 25}, user{120, -40, 80};
  const double g = std::pow(10.0, -path_loss_db(link_distance(bs, user), true, p) / 10.0);

  const auto h1 = draw_link_channel(bs, user, true, 1, p, rng);
  CHECK(std::abs(h1(0) - std::sqrt(g)) < 1e-18);

  for (int m : {2, 4, 8}) {
    const auto h = draw_link_channel(bs, user, true, m, p, rng);
    CHECK(h.squaredNorm() == doctest::Approx(g * m).epsilon(1e-12));
    // Single path at the true azimuth.
    const auto a = array_response(azimuth(bs, user), m);
    CHECK((h - std::sqrt(g) * a).norm() < 1e-12 * std::sqrt(g));
  }
}

TEST_CASE("NLoS channel: mean power equals path gain") {
  const PathLossParams p;
  Rng rng(2);
  const Vec3 bs{0, 0, 25}, user{60, 60, 100};
  const double g = std::pow(10.0, -path_loss_db(link_distance(bs, user), false, p) / 10.0);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += draw_link_channel(bs, user, false, 1, p, rng).squaredNorm();
  CHECK(sum / n == doctest::Approx(g).epsilon(0.03));
}

TEST_CASE("network channels: shape and determinism") {
  ScenarioConfig sc;
  sc.num_cells = 3;
  sc.rng_seed = 5;
  const auto scenario = make_scenario(sc);
  Rng a(9), b(9);
  const auto ha = realize_network_channels(scenario, 4, PathLossParams{}, a);
  const auto hb = realize_network_channels(scenario, 4, PathLossParams{}, b);
  CHECK(ha == hb);
  CHECK(ha.num_cells() == 3);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      CHECK(ha.at(j, l).size() == 4);
      CHECK(ha.at(j, l).allFinite());
    }

  sc.num_cells = 1;
  Rng c(9);
  CHECK(realize_network_channels(make_scenario(sc), 4, PathLossParams{}, c).num_cells() == 1);
}

TEST_CASE("path loss params validation") {
  PathLossParams p;
  CHECK_NOTHROW(p.validate());
  p.los_exponent = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
