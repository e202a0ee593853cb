#include "uavnet/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "uavnet/baselines.hpp"
#include "uavnet/ccdf.hpp"
#include "uavnet/dqn.hpp"
#include "uavnet/rollout.hpp"
#include "uavnet/sequential.hpp"
#include "uavnet/wolpertinger.hpp"

namespace uavnet {

EnvConfig env_for(const ExperimentConfig& config, int num_cells) {
  EnvConfig env = config.env;
  env.scenario.num_cells = num_cells;
  env.scenario.rng_seed = config.master_seed;
  return env;
}

namespace {

std::uint64_t instance_seed(const ExperimentConfig& config, int num_cells, std::uint64_t seed) {
  return derive_stream_seed(config.master_seed, "instance", static_cast<std::uint64_t>(num_cells), seed);
}

std::uint64_t method_stream(const ExperimentConfig& config, const std::string& method,
                            int num_cells, std::uint64_t seed) {
  return derive_stream_seed(config.master_seed, method, static_cast<std::uint64_t>(num_cells), seed);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

enum class Scoring { Committed, EpisodeMean };

// Committed: ground truth at the configuration greedy_rollout commits to.
// EpisodeMean: averaged over every visited configuration, for controllers
// that do not look at rewards.
void evaluate_controller(const ExperimentConfig& config, Environment& env, const RewardSpec& spec,
                         int num_cells, std::uint64_t seed, const Controller& controller,
                         Scoring scoring, CellResult& out) {
  double reward_total = 0.0;
  for (int ep = 0; ep < config.eval_episodes; ++ep) {
    const RolloutResult r =
        greedy_rollout(env, eval_episode_seed(config, num_cells, seed, ep), spec, controller);
    const bool committed = scoring == Scoring::Committed;
    out.sum_rates.push_back(committed ? r.sum_rate : r.episode_sum_rate);
    for (double s : committed ? r.sinr : r.episode_sinr) out.sinr_db.push_back(to_db(s));
    reward_total += r.mean_reward;
  }
  out.row.mean_reward = reward_total / config.eval_episodes;
}

// Evaluates a method that picks one configuration from the channels.
template <class Pick>
void evaluate_static(const ExperimentConfig& config, Environment& env, int num_cells,
                     std::uint64_t seed, Pick pick, CellResult& out) {
  double reward_total = 0.0;
  for (int ep = 0; ep < config.eval_episodes; ++ep) {
    env.reset(eval_episode_seed(config, num_cells, seed, ep));
    const TxConfig tx = pick(env);
    const StepInfo info = env.info_for(tx);
    out.sum_rates.push_back(info.sum_rate);
    for (double s : info.sinr) out.sinr_db.push_back(to_db(s));
    reward_total += env.reward_for(tx, config.env.reward);
  }
  out.row.mean_reward = reward_total / config.eval_episodes;
}

void summarize(CellResult& out) {
  const auto n = static_cast<double>(out.sum_rates.size());
  double mean = 0.0;
  for (double r : out.sum_rates) mean += r;
  mean /= n;
  double ss = 0.0;
  for (double r : out.sum_rates) ss += (r - mean) * (r - mean);
  out.row.mean_sum_rate = mean;
  out.row.std_sum_rate = out.sum_rates.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

}  // namespace

std::uint64_t eval_episode_seed(const ExperimentConfig& config, int num_cells, std::uint64_t seed,
                                int episode) {
  if (config.frozen_channels) return instance_seed(config, num_cells, seed);
  const std::uint64_t base =
      derive_stream_seed(config.master_seed, "eval", static_cast<std::uint64_t>(num_cells), seed);
  return derive_stream_seed(base, "episode", static_cast<std::uint64_t>(num_cells),
                            static_cast<std::uint64_t>(episode));
}

std::uint64_t train_episode_seed(const ExperimentConfig& config, const std::string& method,
                                 int num_cells, std::uint64_t seed, int episode) {
  if (config.frozen_channels) return instance_seed(config, num_cells, seed);
  return derive_stream_seed(method_stream(config, method, num_cells, seed), "train-episode",
                            static_cast<std::uint64_t>(num_cells), static_cast<std::uint64_t>(episode));
}

RewardSpec method_reward(const ExperimentConfig& config, const std::string& method) {
  RewardSpec spec = config.env.reward;
  if (method == "dqn-global") spec.kind = RewardKind::GlobalCsiSinr;
  if (method == "dqn-serving") spec.kind = RewardKind::ServingCsiSnr;
  if (method == "dqn-measured") spec.kind = RewardKind::MeasuredSinr;
  if (method == "dqn-rsrq") spec.kind = RewardKind::Rsrq;
  return spec;
}

CellResult run_cell(const ExperimentConfig& config, const std::string& method, int num_cells,
                    std::uint64_t seed) {
  CellResult out;
  out.row.method = method;
  out.row.num_cells = num_cells;
  out.row.seed = seed;

  Environment env(env_for(config, num_cells));
  const RewardSpec spec = method_reward(config, method);
  const std::uint64_t stream = method_stream(config, method, num_cells, seed);
  const auto train_seed = [&](int e) { return train_episode_seed(config, method, num_cells, seed, e); };
  Rng rng(mix64(stream));

  if (method == "brute") {
    try {
      evaluate_static(config, env, num_cells, seed, [&](const Environment& e) {
        return brute_force_search(e.state().channels, e.codebook(), e.powers(), e.noise_watts(),
                                  config.baseline.brute_force_cap, config.baseline.threads)
            .best;
      }, out);
    } catch (const SearchTooLarge& e) {
      out.skipped = true;
      out.reason = e.what();
      return out;
    }
  } else if (method == "mrt") {
    double reward_total = 0.0;
    for (int ep = 0; ep < config.eval_episodes; ++ep) {
      env.reset(eval_episode_seed(config, num_cells, seed, ep));
      const auto& st = env.state();
      const MrtResult r = mrt_tdma(st.channels, env.codebook(), env.powers(), env.noise_watts(),
                                   config.env.reward.gamma_min_db, config.baseline.mrt_mode);
      out.sum_rates.push_back(r.sum_rate);
      // One cell per slot: the SINR each user sees is its SNR.
      for (double s : r.snr) out.sinr_db.push_back(to_db(s));
      TxConfig tx;
      tx.power_idx.assign(static_cast<std::size_t>(num_cells), env.powers().size() - 1);
      tx.beam_idx = mrt_select(st.channels, env.codebook());
      reward_total += env.reward_for(tx, config.env.reward);
    }
    out.row.mean_reward = reward_total / config.eval_episodes;
  } else if (method == "random" || method == "random-search") {
    evaluate_controller(config, env, spec, num_cells, seed,
                        [&](const Environment&) { return random_action(rng, num_cells); },
                        method == "random" ? Scoring::EpisodeMean : Scoring::Committed, out);
  } else if (method.starts_with("dqn")) {
    const std::uint64_t actions = action_space_size(num_cells);
    if (actions > config.agent.max_joint_actions) {
      out.skipped = true;
      out.reason = "joint action space " + std::to_string(actions) + " exceeds max_joint_actions " +
                   std::to_string(config.agent.max_joint_actions);
      return out;
    }
    DqnAgent agent(env.feature_size(), actions, config.agent.dqn, stream);
    train_dqn(env, agent, config.episodes, train_seed, joint_step_model(spec), rng);
    evaluate_controller(config, env, spec, num_cells, seed, [&](const Environment& e) {
      return ActionVector::from_index(agent.greedy_action(e.state().features), num_cells);
    }, Scoring::Committed, out);
  } else if (method == "wolpertinger") {
    WolpertingerConfig wc = config.agent.wolpertinger;
    wc.k = static_cast<std::size_t>(
        std::min<std::uint64_t>(wc.k, action_space_size(num_cells)));
    WolpertingerAgent agent(env.feature_size(), num_cells, wc, stream);
    train_wolpertinger(env, agent, config.episodes, train_seed, spec, rng);
    evaluate_controller(config, env, spec, num_cells, seed, [&](const Environment& e) {
      return agent.greedy(e.state().features);
    }, Scoring::Committed, out);
  } else if (method == "sequential") {
    SequentialConfig sc = config.agent.sequential;
    sc.episodes_per_agent = config.episodes;
    std::vector<std::uint64_t> probes;
    for (int i = 0; i < sc.order_probe_episodes; ++i) probes.push_back(train_seed(-1 - i));
    const SequentialPolicy policy = sequential_train(
        env, sc, train_seed, probes, stream);
    evaluate_controller(config, env, spec, num_cells, seed, [&](const Environment& e) {
      return policy.act(e.state().features);
    }, Scoring::Committed, out);
  } else {
    throw ConfigError("unknown method '" + method + "'");
  }
  summarize(out);
  return out;
}

MetricsTable run_experiment(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  struct Item {
    const std::string* method;
    int num_cells;
    std::uint64_t seed;
  };
  std::vector<Item> items;
  for (const auto& m : config.methods)
    for (int l : config.cells_sweep)
      for (std::uint64_t s : config.seeds) items.push_back({&m, l, s});

  std::vector<CellResult> results(items.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const Item& it = items[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        results[i] = run_cell(config, *it.method, it.num_cells, it.seed);
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next = items.size();
        return;
      }
      if (log) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::lock_guard lock(log_mutex);
        *log << "[" << (i + 1) << "/" << items.size() << "] " << *it.method << " L=" << it.num_cells
             << " seed=" << it.seed << " "
             << (results[i].skipped ? "skipped: " + results[i].reason
                                    : "sum_rate=" + std::to_string(results[i].row.mean_sum_rate))
             << " (" << secs << " s)\n";
      }
    }
  };
  const int jobs = std::min<int>(config.jobs, static_cast<int>(items.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MetricsTable table;
  std::map<std::pair<std::string, int>, std::vector<double>> pooled;
  for (std::size_t i = 0; i < items.size(); ++i) {
    CellResult& r = results[i];
    if (r.skipped) {
      table.skipped.push_back({*items[i].method, items[i].num_cells, items[i].seed, r.reason});
      continue;
    }
    table.rows.push_back(r.row);
    auto& bucket = pooled[{*items[i].method, items[i].num_cells}];
    bucket.insert(bucket.end(), r.sinr_db.begin(), r.sinr_db.end());
  }
  const std::vector<double> grid = make_grid(config.ccdf.min_db, config.ccdf.max_db, config.ccdf.step_db);
  for (const auto& m : config.methods)
    for (int l : config.cells_sweep) {
      const auto it = pooled.find({m, l});
      if (it == pooled.end() || it->second.empty()) continue;
      table.curves.push_back({m, l, grid, ccdf(it->second, grid), it->second.size()});
    }
  return table;
}

}  // namespace uavnet
