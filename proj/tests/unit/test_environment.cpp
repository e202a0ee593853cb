#include <cmath>

#include "doctest.h"
#include "uavnet/baselines.hpp"
#include "uavnet/environment.hpp"

using namespace uavnet;

namespace {

EnvConfig env_config(int cells) {
  EnvConfig c;
  c.scenario.num_cells = cells;
  c.scenario.rng_seed = 11;
  return c;
}

std::vector<LinkBudget> budgets_with_sinr(std::vector<double> sinr) {
  std::vector<LinkBudget> out;
  for (double g : sinr) out.push_back({g, 0.0, 1.0, g, g, std::log2(1 + g)});
  return out;
}

}  // namespace

TEST_CASE("reward: threshold families") {
  RewardSpec spec;
  spec.scale_by_cells = false;
  const auto pass = budgets_with_sinr({2, 4});
  CHECK(compute_reward({pass, {}}, spec) == doctest::Approx(6.0));
  spec.scale_by_cells = true;
  CHECK(compute_reward({pass, {}}, spec) == doctest::Approx(3.0));

  // -3 dB is 0.501 linear: anything at or below it earns the penalty.
  const double at = db_to_linear(-3.0);
  CHECK(compute_reward({budgets_with_sinr({at, 10}), {}}, spec) == -1.0);
  CHECK(compute_reward({budgets_with_sinr({0.1, 10}), {}}, spec) == -1.0);
  CHECK(compute_reward({budgets_with_sinr({at * 1.0001, 10}), {}}, spec) > 0.0);
  spec.penalty = -7.0;
  CHECK(compute_reward({budgets_with_sinr({0.1}), {}}, spec) == -7.0);
}

TEST_CASE("reward: serving SNR uses the SNR in sum and threshold") {
  RewardSpec spec;
  spec.kind = RewardKind::ServingCsiSnr;
  spec.scale_by_cells = false;
  std::vector<LinkBudget> b{{0, 0, 1, 0.1, 5.0, 0}, {0, 0, 1, 0.2, 3.0, 0}};
  CHECK(compute_reward({b, {}}, spec) == doctest::Approx(8.0));
  spec.kind = RewardKind::GlobalCsiSinr;
  CHECK(compute_reward({b, {}}, spec) == -1.0);
}

TEST_CASE("reward: RSRQ has no threshold; compound mixes") {
  std::vector<MeasurementReport> m{{3, 1, 1.0 / 3, 0.5}, {2, 1, 0.5, 1.0}};
  RewardSpec spec;
  spec.kind = RewardKind::Rsrq;
  spec.scale_by_cells = false;
  CHECK(compute_reward({{}, m}, spec) == doctest::Approx(1.0 / 3 + 0.5));

  spec.kind = RewardKind::Compound;
  spec.compound = {{RewardKind::Rsrq, 0.25}, {RewardKind::GlobalCsiSinr, 0.75}};
  const auto b = budgets_with_sinr({2, 4});
  CHECK(compute_reward({b, m}, spec) == doctest::Approx(0.25 * (1.0 / 3 + 0.5) + 0.75 * 6));
  CHECK_NOTHROW(spec.validate());
  spec.compound[0].weight = 0.5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("reward: missing inputs are a hard error") {
  RewardSpec spec;
  spec.kind = RewardKind::MeasuredSinr;
  CHECK_THROWS_AS(compute_reward({budgets_with_sinr({2}), {}}, spec), std::invalid_argument);
  spec.kind = RewardKind::GlobalCsiSinr;
  std::vector<MeasurementReport> m{{3, 1, 1.0 / 3, 0.5}};
  CHECK_THROWS_AS(compute_reward({{}, m}, spec), std::invalid_argument);
  CHECK(parse_reward_kind("measured-sinr") == RewardKind::MeasuredSinr);
  CHECK_THROWS(parse_reward_kind("sinr"));
}

TEST_CASE("action encoding and semantics") {
  CHECK(action_space_size(1) == 4);
  CHECK(action_space_size(2) == 16);
  CHECK(action_space_size(18) == (std::uint64_t{1} << 36));
  CHECK_THROWS_AS(action_space_size(32), std::overflow_error);

  const auto a = ActionVector::from_index(0b1001, 2);
  CHECK(a.bits()[0] == 1);
  CHECK(a.bits()[3] == 1);
  CHECK(a.power_up(0));
  CHECK_FALSE(a.power_up(1));
  CHECK(a.beam_up(1));
  CHECK(a.index() == 9);
  for (std::uint64_t i = 0; i < 256; ++i) CHECK(ActionVector::from_index(i, 4).index() == i);

  // L = 1, (p=5, b=2), a = [0, 0] -> (4, 1).
  CHECK(apply_action(TxConfig{{5}, {2}}, ActionVector({0, 0}), 10, 8) == TxConfig{{4}, {1}});
  // Power clamps, beam wraps.
  CHECK(apply_action(TxConfig{{9}, {7}}, ActionVector({1, 1}), 10, 8) == TxConfig{{9}, {0}});
  CHECK(apply_action(TxConfig{{0}, {0}}, ActionVector({0, 0}), 10, 8) == TxConfig{{0}, {7}});
  CHECK_THROWS_AS(apply_action(TxConfig{{1}, {1}}, ActionVector({0, 0, 1, 1}), 10, 8),
                  std::invalid_argument);
}

TEST_CASE("reset: determinism, shape, bounds") {
  Environment env(env_config(3));
  const auto f1 = env.reset(42).features;
  CHECK(f1.size() == 15);
  Environment other(env_config(3));
  CHECK(other.reset(42).features == f1);
  CHECK(env.reset(43).features != f1);
  CHECK(env.reset(42).features == f1);

  Environment big(env_config(7));
  for (std::uint64_t s = 0; s < 1000; ++s) {
    for (double x : big.reset(s).features) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("reset: initial configuration") {
  Environment env(env_config(4));
  const auto& st = env.reset(3);
  CHECK(st.step_count == 0);
  const auto best = mrt_select(st.channels, env.codebook());
  for (int l = 0; l < 4; ++l) {
    CHECK(st.tx.power_idx[l] == 4);
    CHECK(st.tx.beam_idx[l] == best[l]);
  }
}

TEST_CASE("step: horizon, inverse actions, metric separation") {
  Environment env(env_config(2));
  env.reset(5);
  // Interior start so neither clamp nor wrap interferes.
  TxConfig start{{4, 5}, {3, 4}};
  env.step_to(start, env.config().reward);
  const ActionVector a({1, 0, 1, 0});
  const ActionVector inverse({0, 1, 0, 1});
  env.step(a);
  env.step(inverse);
  CHECK(env.state().tx == start);

  Environment e2(env_config(2));
  e2.reset(5);
  int steps = 0;
  while (!e2.done()) {
    const auto o = e2.step(ActionVector::from_index(static_cast<std::uint64_t>(steps % 16), 2));
    ++steps;
    CHECK(o.done == (steps == 50));
  }
  CHECK(steps == 50);
  CHECK_THROWS_AS(e2.step(a), std::logic_error);

  Environment e3(env_config(2));
  RewardSpec serving;
  serving.kind = RewardKind::ServingCsiSnr;
  RewardSpec rsrq;
  rsrq.kind = RewardKind::Rsrq;
  e3.reset(9);
  const auto o1 = e3.step(a);
  e3.reset(9);
  const auto o2 = e3.step(a, serving);
  e3.reset(9);
  const auto o3 = e3.step(a, rsrq);
  CHECK(o1.info.sum_rate == o2.info.sum_rate);
  CHECK(o1.info.sum_rate == o3.info.sum_rate);
  CHECK(o1.info.sinr == o3.info.sinr);
}

TEST_CASE("single cell: global and serving rewards coincide") {
  Environment env(env_config(1));
  RewardSpec g, s;
  s.kind = RewardKind::ServingCsiSnr;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    env.reset(seed);
    for (int p = 0; p < 10; ++p)
      for (int b = 0; b < 8; ++b) {
        const TxConfig tx{{p}, {b}};
        CHECK(env.reward_for(tx, g) == env.reward_for(tx, s));
      }
  }
}

TEST_CASE("measured reward equals global-CSI reward; penalty iff some cell fails") {
  Environment env(env_config(3));
  RewardSpec global, measured;
  measured.kind = RewardKind::MeasuredSinr;
  Rng rng(1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    env.reset(seed);
    for (int t = 0; t < 10; ++t) {
      const auto o = env.step(random_action(rng, 3));
      const double rg = env.reward_for(env.state().tx, global);
      const double rm = env.reward_for(env.state().tx, measured);
      CHECK(rm == doctest::Approx(rg).epsilon(1e-9));
      const double min_sinr = *std::min_element(o.info.sinr.begin(), o.info.sinr.end());
      CHECK((rg == global.penalty) == !(min_sinr > db_to_linear(global.gamma_min_db)));
      CHECK(o.info.violated_threshold == (rg == global.penalty));
    }
  }
}
