#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uavnet/channel.hpp"
#include "uavnet/radio.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

enum class RewardKind { GlobalCsiSinr, ServingCsiSnr, MeasuredSinr, Rsrq, Compound };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view text);

struct RewardTerm {
  RewardKind kind = RewardKind::GlobalCsiSinr;
  double weight = 0.0;
};

/// Which training signal the environment emits.
///
/// The threshold families (global SINR, serving SNR, measured SINR) return
/// the per-cell sum of the linear quantity when every cell is strictly above
/// gamma_min and `penalty` otherwise. RSRQ sums rsrq with no threshold.
/// Compound is a convex combination of the other kinds. With scale_by_cells
/// every sum is divided by L.
struct RewardSpec {
  RewardKind kind = RewardKind::GlobalCsiSinr;
  double gamma_min_db = -3.0;
  double penalty = -1.0;
  bool scale_by_cells = true;
  std::vector<RewardTerm> compound;

  void validate() const;
  bool needs_measurements() const;
  bool needs_budgets() const;
};

/// Inputs to a reward evaluation. An empty span means "not available".
struct RewardInputs {
  std::span<const LinkBudget> budgets;
  std::span<const MeasurementReport> measurements;
};

/// Throws std::invalid_argument if the spec needs an input that is absent.
double compute_reward(const RewardInputs& inputs, const RewardSpec& spec);

struct RadioConfig {
  int antennas = 4;
  int codebook_size = 8;
  int power_levels = 10;
  double max_power_dbm = 30.0;
  double bandwidth_hz = 100e6;
  double noise_figure_db = 9.0;

  void validate() const;
};

struct EnvConfig {
  ScenarioConfig scenario;
  PathLossParams path_loss;
  RadioConfig radio;
  int horizon = 50;
  RewardSpec reward;

  void validate() const;
};

/// The 2L-bit joint action. Bit l (< L) steps BS l's power down (0) or up (1);
/// bit L + l steps its beam index down (0) or up (1). The integer encoding is
/// index = sum_i bits[i] * 2^i.
class ActionVector {
 public:
  ActionVector() = default;
  explicit ActionVector(std::vector<std::uint8_t> bits);

  static ActionVector from_index(std::uint64_t index, int num_cells);

  int num_cells() const { return static_cast<int>(bits_.size() / 2); }
  std::size_t size() const { return bits_.size(); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  bool power_up(int cell) const { return bits_[static_cast<std::size_t>(cell)] != 0; }
  bool beam_up(int cell) const {
    return bits_[static_cast<std::size_t>(num_cells() + cell)] != 0;
  }
  std::uint64_t index() const;

  friend bool operator==(const ActionVector&, const ActionVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// |A| = 2^(2L). Throws std::overflow_error when 2L >= 64.
std::uint64_t action_space_size(int num_cells);

/// Power steps clamp at the ends of the power grid, beam steps wrap modulo |W|.
/// Throws std::invalid_argument when the action length is not 2L.
TxConfig apply_action(const TxConfig& tx, const ActionVector& action, int num_powers,
                      int num_beams);

/// Per-cell step of the same primitives, used by the per-cell agents.
void apply_cell_step(TxConfig& tx, int cell, bool power_up, bool beam_up, int num_powers,
                     int num_beams);

struct StepInfo {
  double sum_rate = 0.0;
  std::vector<double> sinr;  // linear, per cell
  bool violated_threshold = false;
};

struct StepOutcome {
  std::vector<double> features;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct EnvState {
  ScenarioRealization scenario;
  ChannelSet channels;
  TxConfig tx;
  int step_count = 0;
  std::vector<double> features;
};

/// The joint power/beam control MDP over one drop of the network.
///
/// Channels are quasi-static: reset() draws a new scenario and channel set
/// from the episode seed and they stay fixed for the whole episode. Not
/// thread-safe; use one instance per worker.
class Environment {
 public:
  explicit Environment(EnvConfig config);

  const EnvState& reset(std::uint64_t episode_seed);

  /// Advances with the configured reward spec.
  StepOutcome step(const ActionVector& action);
  StepOutcome step(const ActionVector& action, const RewardSpec& spec);
  /// Moves to an explicit configuration (one env step). Used when cells are
  /// stepped individually.
  StepOutcome step_to(const TxConfig& next, const RewardSpec& spec);

  const EnvState& state() const { return state_; }
  bool done() const { return state_.step_count >= config_.horizon; }
  const EnvConfig& config() const { return config_; }
  const Codebook& codebook() const { return codebook_; }
  const PowerSet& powers() const { return powers_; }
  double noise_watts() const { return noise_watts_; }
  int num_cells() const { return config_.scenario.num_cells; }
  int feature_size() const { return 5 * num_cells(); }
  std::uint64_t num_actions() const { return action_space_size(num_cells()); }

  /// Power at the middle level, beam = best codeword on each serving link.
  TxConfig initial_tx() const;
  std::vector<double> features_for(const TxConfig& tx) const;
  std::vector<LinkBudget> budgets_for(const TxConfig& tx) const;
  double reward_for(const TxConfig& tx, const RewardSpec& spec) const;
  StepInfo info_for(const TxConfig& tx) const;

 private:
  EnvConfig config_;
  Codebook codebook_;
  PowerSet powers_;
  double noise_watts_;
  std::vector<Vec3> layout_;
  double x_lo_, x_span_, y_lo_, y_span_;
  std::optional<std::uint64_t> loaded_seed_;
  EnvState state_;
};

}  // namespace uavnet
