#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "tta/policy/policy_net.hpp"

namespace tta::train {

struct PPOConfig {
  double vf_coef = 1.0;
  double ent_coef = 0.01;
  int n_steps = 512;
  int batch_size = 256;
  double clip_range = 0.1;
  double discount_gamma = 0.99;
  double gae_lambda = 0.95;
  double lr_initial = 2.5e-4;
  double lr_final = 2.5e-6;
  int epochs_per_update = 4;
  double max_grad_norm = 0.5;

  void validate() const;
};

nlohmann::json ppo_to_json(const PPOConfig& c);
PPOConfig ppo_from_json(const nlohmann::json& doc);

/// Linear interpolation from lr_initial (progress 0) to lr_final (progress 1).
double linear_lr(const PPOConfig& c, double progress);

class TrainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-major rollout storage: row t * num_envs + e is env e at step t.
struct RolloutBuffer {
  int num_envs = 0;
  int n_steps = 0;
  policy::ObservationBatch obs;
  torch::Tensor actions;  // [rows, 12] float, own frame
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<bool> dones;
  std::vector<double> last_values;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return rewards.size(); }
  /// Fills advantages and returns by GAE.
  void finish(double gamma, double lambda);
};

struct TrainStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double lr = 0.0;
  int minibatches = 0;
};

nlohmann::json stats_to_json(const TrainStats& s);

/// Clipped-surrogate PPO over the buffer. Loss = policy_loss +
/// vf_coef * value_loss - ent_coef * entropy, advantages normalised per
/// minibatch, gradients clipped to max_grad_norm. Minibatch order comes from
/// `seed`. Throws TrainError on a non-finite loss.
TrainStats ppo_update(policy::PolicyNet& net, torch::optim::Adam& optimizer,
                      const RolloutBuffer& buffer, const PPOConfig& config, double progress,
                      std::uint64_t seed);

}  // namespace tta::train
