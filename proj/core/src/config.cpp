#include "uavnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace uavnet {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::vector<std::string_view>& known_methods() {
  static const std::vector<std::string_view> names{
      "brute",      "mrt",         "random",       "random-search", "dqn",
      "dqn-global", "dqn-serving", "dqn-measured", "dqn-rsrq",      "wolpertinger",
      "sequential"};
  return names;
}

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// Wraps one JSON object, records which keys were read, and rejects the rest.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    check(j_.is_object(), where("") + "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where(key) + "wrong type (" + e.what() + ")");
    }
  }

  template <class T, class Parse>
  void get_enum(const char* key, T& out, Parse parse) {
    std::string text;
    bool present = has(key);
    get(key, text);
    if (!present) return;
    try {
      out = parse(text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where(key) + e.what());
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Reader child(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    const auto it = j_.find(key);
    return Reader(it == j_.end() ? empty : *it, path_ + key + ".");
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string where(const std::string& key) const { return "config key '" + path_ + key + "': "; }

  void finish() const {
    for (const auto& item : j_.items())
      check(seen_.count(item.key()) != 0, where(item.key()) + "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

void read_adam(Reader r, AdamConfig& a) {
  r.get("learning_rate", a.learning_rate);
  r.get("beta1", a.beta1);
  r.get("beta2", a.beta2);
  r.get("epsilon", a.epsilon);
  r.finish();
}

void read_schedule(Reader r, LinearSchedule& s) {
  r.get("start", s.start);
  r.get("end", s.end);
  r.get("decay_fraction", s.decay_fraction);
  r.finish();
}

void read_reward(Reader r, RewardSpec& spec) {
  r.get_enum("kind", spec.kind, parse_reward_kind);
  r.get("gamma_min_db", spec.gamma_min_db);
  r.get("penalty", spec.penalty);
  r.get("scale_by_cells", spec.scale_by_cells);
  if (const json* terms = r.raw("compound")) {
    check(terms->is_array(), r.where("compound") + "expected an array");
    spec.compound.clear();
    for (std::size_t i = 0; i < terms->size(); ++i) {
      Reader t((*terms)[i], "env.reward.compound[" + std::to_string(i) + "].");
      RewardTerm term;
      t.get_enum("kind", term.kind, parse_reward_kind);
      t.get("weight", term.weight);
      t.finish();
      spec.compound.push_back(term);
    }
  }
  r.finish();
}

void read_dqn(Reader r, DqnConfig& c) {
  r.get("hidden", c.hidden);
  read_adam(r.child("adam"), c.adam);
  r.get("discount", c.discount);
  r.get("batch_size", c.batch_size);
  r.get("buffer_capacity", c.buffer_capacity);
  r.get("warmup", c.warmup);
  r.get("target_sync_period", c.target_sync_period);
  r.get("huber_delta", c.huber_delta);
  r.get("reward_scale", c.reward_scale);
  read_schedule(r.child("epsilon"), c.epsilon);
  r.finish();
}

void read_wolpertinger(Reader r, WolpertingerConfig& c) {
  r.get("actor_hidden", c.actor_hidden);
  r.get("critic_hidden", c.critic_hidden);
  read_adam(r.child("actor_adam"), c.actor_adam);
  read_adam(r.child("critic_adam"), c.critic_adam);
  r.get("discount", c.discount);
  r.get("batch_size", c.batch_size);
  r.get("buffer_capacity", c.buffer_capacity);
  r.get("warmup", c.warmup);
  r.get("k", c.k);
  r.get("tau", c.tau);
  r.get("huber_delta", c.huber_delta);
  r.get("reward_scale", c.reward_scale);
  read_schedule(r.child("noise"), c.noise);
  r.finish();
}

void read_sequential(Reader r, SequentialConfig& c) {
  read_dqn(r.child("dqn"), c.agent);
  r.get_enum("order_metric", c.order_metric, parse_order_metric);
  r.get("interference_weight", c.interference_weight);
  r.get("order_probe_episodes", c.order_probe_episodes);
  r.finish();
}

ordered_json adam_json(const AdamConfig& a) {
  return {{"learning_rate", a.learning_rate},
          {"beta1", a.beta1},
          {"beta2", a.beta2},
          {"epsilon", a.epsilon}};
}

ordered_json schedule_json(const LinearSchedule& s) {
  return {{"start", s.start}, {"end", s.end}, {"decay_fraction", s.decay_fraction}};
}

ordered_json dqn_json(const DqnConfig& c) {
  return {{"hidden", c.hidden},
          {"adam", adam_json(c.adam)},
          {"discount", c.discount},
          {"batch_size", c.batch_size},
          {"buffer_capacity", c.buffer_capacity},
          {"warmup", c.warmup},
          {"target_sync_period", c.target_sync_period},
          {"huber_delta", c.huber_delta},
          {"reward_scale", c.reward_scale},
          {"epsilon", schedule_json(c.epsilon)}};
}

}  // namespace

void ExperimentConfig::validate() const {
  check(!methods.empty(), "config key 'methods': empty");
  std::set<std::string> unique;
  for (const auto& m : methods) {
    check(std::find(known_methods().begin(), known_methods().end(), m) != known_methods().end(),
          "config key 'methods': unknown method '" + m + "'");
    check(unique.insert(m).second, "config key 'methods': duplicate method '" + m + "'");
  }
  check(!cells_sweep.empty(), "config key 'cells_sweep': empty");
  for (int l : cells_sweep) check(l >= 1 && l <= 31, "config key 'cells_sweep': L must be in [1, 31]");
  check(!seeds.empty(), "config key 'seeds': empty");
  check(episodes >= 1, "config key 'episodes': must be >= 1");
  check(eval_episodes >= 1, "config key 'eval_episodes': must be >= 1");
  check(jobs >= 1, "config key 'jobs': must be >= 1");
  check(!output_dir.empty(), "config key 'output_dir': empty");
  check(ccdf.step_db > 0.0 && ccdf.max_db >= ccdf.min_db, "config key 'ccdf': need step_db > 0 and max_db >= min_db");
  check(baseline.threads >= 1, "config key 'baseline.threads': must be >= 1");
  check(agent.max_joint_actions >= 1, "config key 'agent.max_joint_actions': must be >= 1");
  try {
    EnvConfig probe = env;
    probe.scenario.num_cells = 1;
    probe.validate();
    agent.dqn.validate();
    agent.wolpertinger.validate();
    SequentialConfig seq = agent.sequential;
    seq.episodes_per_agent = episodes;
    seq.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  ExperimentConfig c;
  Reader r(root, "");
  r.get("master_seed", c.master_seed);
  r.get("cells_sweep", c.cells_sweep);
  r.get("seeds", c.seeds);
  r.get("episodes", c.episodes);
  r.get("eval_episodes", c.eval_episodes);
  r.get("methods", c.methods);
  r.get("frozen_channels", c.frozen_channels);
  r.get("output_dir", c.output_dir);
  r.get("jobs", c.jobs);
  {
    Reader g = r.child("ccdf");
    g.get("min_db", c.ccdf.min_db);
    g.get("max_db", c.ccdf.max_db);
    g.get("step_db", c.ccdf.step_db);
    g.finish();
  }
  {
    Reader s = r.child("scenario");
    auto& sc = c.env.scenario;
    s.get("cell_radius", sc.cell_radius);
    s.get("bs_height", sc.bs_height);
    std::vector<double> range{sc.user_z_min, sc.user_z_max};
    s.get("user_altitude_range", range);
    check(range.size() == 2, s.where("user_altitude_range") + "expected [z_min, z_max]");
    sc.user_z_min = range[0];
    sc.user_z_max = range[1];
    s.get_enum("user_placement", sc.placement, parse_user_placement);
    s.get("los_probability", sc.los_probability);
    s.finish();
  }
  {
    Reader ch = r.child("channel");
    auto& pl = c.env.path_loss;
    ch.get("los_intercept_db", pl.los_intercept_db);
    ch.get("los_exponent", pl.los_exponent);
    ch.get("nlos_intercept_db", pl.nlos_intercept_db);
    ch.get("nlos_exponent", pl.nlos_exponent);
    ch.get("nlos_paths", pl.nlos_paths);
    ch.finish();
  }
  {
    Reader rd = r.child("radio");
    auto& ra = c.env.radio;
    rd.get("antennas", ra.antennas);
    rd.get("codebook_size", ra.codebook_size);
    rd.get("power_levels", ra.power_levels);
    rd.get("max_power_dbm", ra.max_power_dbm);
    rd.get("bandwidth_hz", ra.bandwidth_hz);
    rd.get("noise_figure_db", ra.noise_figure_db);
    rd.finish();
  }
  {
    Reader e = r.child("env");
    e.get("horizon", c.env.horizon);
    read_reward(e.child("reward"), c.env.reward);
    e.finish();
  }
  {
    Reader a = r.child("agent");
    read_dqn(a.child("dqn"), c.agent.dqn);
    read_wolpertinger(a.child("wolpertinger"), c.agent.wolpertinger);
    read_sequential(a.child("sequential"), c.agent.sequential);
    a.get("max_joint_actions", c.agent.max_joint_actions);
    a.finish();
  }
  {
    Reader b = r.child("baseline");
    b.get("brute_force_cap", c.baseline.brute_force_cap);
    b.get_enum("mrt_mode", c.baseline.mrt_mode, parse_mrt_mode);
    b.get("threads", c.baseline.threads);
    b.finish();
  }
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

std::string to_json(const ExperimentConfig& c) {
  const auto& sc = c.env.scenario;
  const auto& pl = c.env.path_loss;
  const auto& ra = c.env.radio;
  const auto& rw = c.env.reward;
  ordered_json compound = ordered_json::array();
  for (const auto& t : rw.compound)
    compound.push_back({{"kind", std::string(to_string(t.kind))}, {"weight", t.weight}});
  const auto& w = c.agent.wolpertinger;
  const auto& s = c.agent.sequential;

  ordered_json j;
  j["master_seed"] = c.master_seed;
  j["cells_sweep"] = c.cells_sweep;
  j["seeds"] = c.seeds;
  j["episodes"] = c.episodes;
  j["eval_episodes"] = c.eval_episodes;
  j["methods"] = c.methods;
  j["frozen_channels"] = c.frozen_channels;
  j["output_dir"] = c.output_dir;
  j["jobs"] = c.jobs;
  j["ccdf"] = {{"min_db", c.ccdf.min_db}, {"max_db", c.ccdf.max_db}, {"step_db", c.ccdf.step_db}};
  j["scenario"] = {{"cell_radius", sc.cell_radius},
                   {"bs_height", sc.bs_height},
                   {"user_altitude_range", {sc.user_z_min, sc.user_z_max}},
                   {"user_placement", std::string(to_string(sc.placement))},
                   {"los_probability", sc.los_probability}};
  j["channel"] = {{"los_intercept_db", pl.los_intercept_db},
                  {"los_exponent", pl.los_exponent},
                  {"nlos_intercept_db", pl.nlos_intercept_db},
                  {"nlos_exponent", pl.nlos_exponent},
                  {"nlos_paths", pl.nlos_paths}};
  j["radio"] = {{"antennas", ra.antennas},
                {"codebook_size", ra.codebook_size},
                {"power_levels", ra.power_levels},
                {"max_power_dbm", ra.max_power_dbm},
                {"bandwidth_hz", ra.bandwidth_hz},
                {"noise_figure_db", ra.noise_figure_db}};
  j["env"] = {{"horizon", c.env.horizon},
              {"reward",
               {{"kind", std::string(to_string(rw.kind))},
                {"gamma_min_db", rw.gamma_min_db},
                {"penalty", rw.penalty},
                {"scale_by_cells", rw.scale_by_cells},
                {"compound", compound}}}};
  j["agent"] = {{"dqn", dqn_json(c.agent.dqn)},
                {"wolpertinger",
                 {{"actor_hidden", w.actor_hidden},
                  {"critic_hidden", w.critic_hidden},
                  {"actor_adam", adam_json(w.actor_adam)},
                  {"critic_adam", adam_json(w.critic_adam)},
                  {"discount", w.discount},
                  {"batch_size", w.batch_size},
                  {"buffer_capacity", w.buffer_capacity},
                  {"warmup", w.warmup},
                  {"k", w.k},
                  {"tau", w.tau},
                  {"huber_delta", w.huber_delta},
                  {"reward_scale", w.reward_scale},
                  {"noise", schedule_json(w.noise)}}},
                {"sequential",
                 {{"dqn", dqn_json(s.agent)},
                  {"order_metric", std::string(to_string(s.order_metric))},
                  {"interference_weight", s.interference_weight},
                  {"order_probe_episodes", s.order_probe_episodes}}},
                {"max_joint_actions", c.agent.max_joint_actions}};
  j["baseline"] = {{"brute_force_cap", c.baseline.brute_force_cap},
                   {"mrt_mode", std::string(to_string(c.baseline.mrt_mode))},
                   {"threads", c.baseline.threads}};
  return j.dump(2) + "\n";
}

}  // namespace uavnet
