#include "tta/train/gae.hpp"

#include <stdexcept>

namespace tta::train {

GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      const std::vector<bool>& dones, const std::vector<double>& last_values,
                      int num_envs, double gamma, double lambda) {
  if (num_envs < 1 || rewards.size() % static_cast<std::size_t>(num_envs) != 0 ||
      values.size() != rewards.size() || dones.size() != rewards.size() ||
      last_values.size() != static_cast<std::size_t>(num_envs))
    throw std::invalid_argument("inconsistent rollout sizes for GAE");
  const auto steps = static_cast<int>(rewards.size()) / num_envs;
  GaeResult r;
  r.advantages.assign(rewards.size(), 0.0);
  r.returns.assign(rewards.size(), 0.0);
  for (int e = 0; e < num_envs; ++e) {
    double gae = 0.0;
    for (int t = steps - 1; t >= 0; --t) {
      const auto i = static_cast<std::size_t>(t) * num_envs + e;
      const double next_value =
          t == steps - 1 ? last_values[static_cast<std::size_t>(e)] : values[i + num_envs];
      const double live = dones[i] ? 0.0 : 1.0;
      const double delta = rewards[i] + gamma * next_value * live - values[i];
      gae = delta + gamma * lambda * live * gae;
      r.advantages[i] = gae;
      r.returns[i] = gae + values[i];
    }
  }
  return r;
}

}  // namespace tta::train
