#include "uavnet/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uavnet {

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::GlobalCsiSinr:
      return "global-csi-sinr";
    case RewardKind::ServingCsiSnr:
      return "serving-csi-snr";
    case RewardKind::MeasuredSinr:
      return "measured-sinr";
    case RewardKind::Rsrq:
      return "rsrq";
    case RewardKind::Compound:
      return "compound";
  }
  return "?";
}

RewardKind parse_reward_kind(std::string_view text) {
  for (auto k : {RewardKind::GlobalCsiSinr, RewardKind::ServingCsiSnr, RewardKind::MeasuredSinr,
                 RewardKind::Rsrq, RewardKind::Compound}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown reward kind '" + std::string(text) + "'");
}

void RewardSpec::validate() const {
  if (!std::isfinite(gamma_min_db)) throw std::invalid_argument("reward.gamma_min_db not finite");
  if (!std::isfinite(penalty)) throw std::invalid_argument("reward.penalty not finite");
  if (kind != RewardKind::Compound) return;
  if (compound.empty()) throw std::invalid_argument("reward: compound kind needs weights");
  double total = 0.0;
  for (const auto& term : compound) {
    if (term.kind == RewardKind::Compound)
      throw std::invalid_argument("reward: compound terms cannot nest");
    if (!(term.weight >= 0.0)) throw std::invalid_argument("reward: weights must be >= 0");
    total += term.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("reward: weights must sum to 1");
}

bool RewardSpec::needs_measurements() const {
  if (kind == RewardKind::MeasuredSinr || kind == RewardKind::Rsrq) return true;
  if (kind != RewardKind::Compound) return false;
  return std::any_of(compound.begin(), compound.end(), [](const RewardTerm& t) {
    return t.kind == RewardKind::MeasuredSinr || t.kind == RewardKind::Rsrq;
  });
}

bool RewardSpec::needs_budgets() const {
  if (kind == RewardKind::GlobalCsiSinr || kind == RewardKind::ServingCsiSnr) return true;
  if (kind != RewardKind::Compound) return false;
  return std::any_of(compound.begin(), compound.end(), [](const RewardTerm& t) {
    return t.kind == RewardKind::GlobalCsiSinr || t.kind == RewardKind::ServingCsiSnr;
  });
}

namespace {

template <class Range, class Proj>
double threshold_sum(const Range& cells, Proj value, const RewardSpec& spec) {
  const double threshold = db_to_linear(spec.gamma_min_db);
  double total = 0.0;
  for (const auto& c : cells) {
    const double v = value(c);
    if (!(v > threshold)) return spec.penalty;
    total += v;
  }
  return spec.scale_by_cells ? total / static_cast<double>(std::size(cells)) : total;
}

double single_reward(const RewardInputs& in, RewardKind kind, const RewardSpec& spec) {
  switch (kind) {
    case RewardKind::GlobalCsiSinr:
    case RewardKind::ServingCsiSnr:
      if (in.budgets.empty())
        throw std::invalid_argument("compute_reward: link budgets required for " +
                                    std::string(to_string(kind)));
      if (kind == RewardKind::GlobalCsiSinr)
        return threshold_sum(in.budgets, [](const LinkBudget& b) { return b.sinr; }, spec);
      return threshold_sum(in.budgets, [](const LinkBudget& b) { return b.snr; }, spec);
    case RewardKind::MeasuredSinr:
    case RewardKind::Rsrq: {
      if (in.measurements.empty())
        throw std::invalid_argument("compute_reward: measurements required for " +
                                    std::string(to_string(kind)));
      if (kind == RewardKind::MeasuredSinr)
        return threshold_sum(in.measurements,
                             [](const MeasurementReport& m) { return m.measured_sinr; }, spec);
      double total = 0.0;
      for (const auto& m : in.measurements) total += m.rsrq;
      return spec.scale_by_cells ? total / static_cast<double>(in.measurements.size()) : total;
    }
    case RewardKind::Compound:
      break;
  }
  throw std::logic_error("single_reward: compound handled by caller");
}

}  // namespace

double compute_reward(const RewardInputs& inputs, const RewardSpec& spec) {
  if (spec.kind != RewardKind::Compound) return single_reward(inputs, spec.kind, spec);
  double total = 0.0;
  for (const auto& term : spec.compound) total += term.weight * single_reward(inputs, term.kind, spec);
  return total;
}

void RadioConfig::validate() const {
  if (antennas < 1) throw std::invalid_argument("radio.antennas must be >= 1");
  if (codebook_size < 1) throw std::invalid_argument("radio.codebook_size must be >= 1");
  if (power_levels < 1) throw std::invalid_argument("radio.power_levels must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("radio.bandwidth_hz must be > 0");
  if (!std::isfinite(max_power_dbm) || !std::isfinite(noise_figure_db))
    throw std::invalid_argument("radio: power and noise figure must be finite");
}

void EnvConfig::validate() const {
  scenario.validate();
  path_loss.validate();
  radio.validate();
  reward.validate();
  if (horizon < 1) throw std::invalid_argument("env.horizon must be >= 1");
}

ActionVector::ActionVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.size() % 2 != 0) throw std::invalid_argument("ActionVector: length must be even");
  for (auto& b : bits_)
    if (b > 1) throw std::invalid_argument("ActionVector: bits must be 0 or 1");
}

ActionVector ActionVector::from_index(std::uint64_t index, int num_cells) {
  const auto size = action_space_size(num_cells);
  if (index >= size) throw std::out_of_range("ActionVector::from_index: index out of range");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(2 * num_cells));
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<std::uint8_t>((index >> i) & 1U);
  return ActionVector(std::move(bits));
}

std::uint64_t ActionVector::index() const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) idx |= static_cast<std::uint64_t>(bits_[i]) << i;
  return idx;
}

std::uint64_t action_space_size(int num_cells) {
  if (num_cells < 1) throw std::invalid_argument("action_space_size: num_cells must be >= 1");
  if (2 * num_cells >= 64) throw std::overflow_error("action_space_size: 2^(2L) overflows 64 bits");
  return std::uint64_t{1} << (2 * num_cells);
}

void apply_cell_step(TxConfig& tx, int cell, bool power_up, bool beam_up, int num_powers,
                     int num_beams) {
  auto& p = tx.power_idx[static_cast<std::size_t>(cell)];
  auto& b = tx.beam_idx[static_cast<std::size_t>(cell)];
  p = std::clamp(p + (power_up ? 1 : -1), 0, num_powers - 1);
  b = ((b + (beam_up ? 1 : -1)) % num_beams + num_beams) % num_beams;
}

TxConfig apply_action(const TxConfig& tx, const ActionVector& action, int num_powers,
                      int num_beams) {
  const int n = tx.num_cells();
  if (static_cast<int>(action.size()) != 2 * n)
    throw std::invalid_argument("apply_action: action length " + std::to_string(action.size()) +
                                " != 2L = " + std::to_string(2 * n));
  TxConfig next = tx;
  for (int cell = 0; cell < n; ++cell)
    apply_cell_step(next, cell, action.power_up(cell), action.beam_up(cell), num_powers, num_beams);
  return next;
}

Environment::Environment(EnvConfig config)
    : config_(std::move(config)),
      codebook_(),
      powers_(),
      noise_watts_(0.0),
      x_lo_(0.0),
      x_span_(1.0),
      y_lo_(0.0),
      y_span_(1.0) {
  config_.validate();
  codebook_ = dft_codebook(config_.radio.antennas, config_.radio.codebook_size);
  powers_ = PowerSet::uniform(config_.radio.power_levels, config_.radio.max_power_dbm);
  noise_watts_ = noise_power_watts(config_.radio.bandwidth_hz, config_.radio.noise_figure_db);
  layout_ = build_layout(config_.scenario);

  const double r = config_.scenario.cell_radius;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& p : layout_) {
    x_min = std::min(x_min, p.x);
    x_max = std::max(x_max, p.x);
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  x_lo_ = x_min - r;
  x_span_ = x_max - x_min + 2.0 * r;
  y_lo_ = y_min - r;
  y_span_ = y_max - y_min + 2.0 * r;
}

const EnvState& Environment::reset(std::uint64_t episode_seed) {
  if (!loaded_seed_ || *loaded_seed_ != episode_seed) {
    Rng rng(mix64(config_.scenario.rng_seed) ^ mix64(episode_seed));
    state_.scenario = place_users(config_.scenario, layout_, rng);
    state_.channels =
        realize_network_channels(state_.scenario, config_.radio.antennas, config_.path_loss, rng);
    loaded_seed_ = episode_seed;
  }
  state_.tx = initial_tx();
  state_.step_count = 0;
  state_.features = features_for(state_.tx);
  return state_;
}

TxConfig Environment::initial_tx() const {
  const int n = num_cells();
  TxConfig tx;
  tx.power_idx.assign(static_cast<std::size_t>(n), (powers_.size() - 1) / 2);
  tx.beam_idx.resize(static_cast<std::size_t>(n));
  for (int cell = 0; cell < n; ++cell) {
    int best = 0;
    double best_gain = -1.0;
    for (int w = 0; w < codebook_.size(); ++w) {
      const double g = received_power(1.0, state_.channels.at(cell, cell), codebook_[w]);
      if (g > best_gain) {
        best_gain = g;
        best = w;
      }
    }
    tx.beam_idx[static_cast<std::size_t>(cell)] = best;
  }
  return tx;
}

std::vector<double> Environment::features_for(const TxConfig& tx) const {
  const int n = num_cells();
  const auto& sc = config_.scenario;
  const double z_span = sc.user_z_max - sc.user_z_min;
  std::vector<double> f(static_cast<std::size_t>(5 * n));
  for (int cell = 0; cell < n; ++cell) {
    const Vec3& u = state_.scenario.user_positions[static_cast<std::size_t>(cell)];
    const auto c = static_cast<std::size_t>(3 * cell);
    f[c] = std::clamp((u.x - x_lo_) / x_span_, 0.0, 1.0);
    f[c + 1] = std::clamp((u.y - y_lo_) / y_span_, 0.0, 1.0);
    f[c + 2] = z_span > 0.0 ? std::clamp((u.z - sc.user_z_min) / z_span, 0.0, 1.0) : 0.0;
  }
  const int np = powers_.size();
  const int nb = codebook_.size();
  for (int cell = 0; cell < n; ++cell) {
    const auto i = static_cast<std::size_t>(cell);
    f[static_cast<std::size_t>(3 * n) + i] =
        np > 1 ? static_cast<double>(tx.power_idx[i]) / (np - 1) : 0.0;
    f[static_cast<std::size_t>(4 * n) + i] =
        nb > 1 ? static_cast<double>(tx.beam_idx[i]) / (nb - 1) : 0.0;
  }
  return f;
}

std::vector<LinkBudget> Environment::budgets_for(const TxConfig& tx) const {
  return sinr_all(state_.channels, tx, codebook_, powers_, noise_watts_);
}

double Environment::reward_for(const TxConfig& tx, const RewardSpec& spec) const {
  std::vector<LinkBudget> budgets;
  std::vector<MeasurementReport> measurements;
  if (spec.needs_budgets()) budgets = budgets_for(tx);
  if (spec.needs_measurements())
    measurements = probe_measurements(state_.channels, tx, codebook_, powers_, noise_watts_);
  return compute_reward({budgets, measurements}, spec);
}

StepInfo Environment::info_for(const TxConfig& tx) const {
  const auto budgets = budgets_for(tx);
  StepInfo info;
  info.sum_rate = sum_rate(budgets);
  const double threshold = db_to_linear(config_.reward.gamma_min_db);
  for (const auto& b : budgets) {
    info.sinr.push_back(b.sinr);
    if (!(b.sinr > threshold)) info.violated_threshold = true;
  }
  return info;
}

StepOutcome Environment::step(const ActionVector& action) { return step(action, config_.reward); }

StepOutcome Environment::step(const ActionVector& action, const RewardSpec& spec) {
  if (done()) throw std::logic_error("Environment::step: episode already terminated");
  return step_to(apply_action(state_.tx, action, powers_.size(), codebook_.size()), spec);
}

StepOutcome Environment::step_to(const TxConfig& next, const RewardSpec& spec) {
  if (done()) throw std::logic_error("Environment::step: episode already terminated");
  next.validate(powers_.size(), codebook_.size());
  if (next.num_cells() != num_cells())
    throw std::invalid_argument("Environment::step_to: wrong number of cells");
  state_.tx = next;
  ++state_.step_count;
  state_.features = features_for(state_.tx);

  StepOutcome out;
  out.features = state_.features;
  out.reward = reward_for(state_.tx, spec);
  out.done = done();
  out.info = info_for(state_.tx);
  return out;
}

}  // namespace uavnet
