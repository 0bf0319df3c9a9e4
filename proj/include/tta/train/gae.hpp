#pragma once

#include <vector>

namespace tta::train {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// Generalised advantage estimation over a time-major [n_steps x num_envs]
/// layout. dones[t*num_envs + e] marks that the episode ended after step t,
/// so nothing is bootstrapped across it; last_values bootstrap the final step.
GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      const std::vector<bool>& dones, const std::vector<double>& last_values,
                      int num_envs, double gamma, double lambda);

}  // namespace tta::train
