#include "uavnet/rollout.hpp"

namespace uavnet {

RolloutResult greedy_rollout(Environment& env, std::uint64_t episode_seed, const RewardSpec& spec,
                             const Controller& controller) {
  env.reset(episode_seed);
  RolloutResult out;
  out.committed = env.state().tx;
  out.committed_reward = env.reward_for(out.committed, spec);
  double total = 0.0;
  int steps = 0;
  while (!env.done()) {
    const StepOutcome o = env.step(controller(env), spec);
    total += o.reward;
    out.episode_sum_rate += o.info.sum_rate;
    out.episode_sinr.insert(out.episode_sinr.end(), o.info.sinr.begin(), o.info.sinr.end());
    ++steps;
    if (o.reward > out.committed_reward) {
      out.committed_reward = o.reward;
      out.committed = env.state().tx;
      out.committed_step = steps;
    }
  }
  out.mean_reward = steps > 0 ? total / steps : out.committed_reward;
  if (steps > 0) out.episode_sum_rate /= steps;
  const StepInfo info = env.info_for(out.committed);
  out.sum_rate = info.sum_rate;
  out.sinr = info.sinr;
  return out;
}

}  // namespace uavnet
