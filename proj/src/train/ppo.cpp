#include "tta/train/ppo.hpp"

#include <cmath>
#include <sstream>

#include "tta/train/gae.hpp"

namespace tta::train {

void PPOConfig::validate() const {
  if (!(clip_range > 0.0 && clip_range < 1.0)) throw std::invalid_argument("clip_range must lie in (0, 1)");
  if (lr_final > lr_initial) throw std::invalid_argument("lr_final must not exceed lr_initial");
  if (lr_final < 0.0) throw std::invalid_argument("learning rates must be non-negative");
  if (n_steps < 1 || batch_size < 1 || epochs_per_update < 1)
    throw std::invalid_argument("n_steps, batch_size and epochs_per_update must be positive");
  if (!(discount_gamma >= 0.0 && discount_gamma <= 1.0)) throw std::invalid_argument("discount_gamma must lie in [0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw std::invalid_argument("gae_lambda must lie in [0, 1]");
}

nlohmann::json ppo_to_json(const PPOConfig& c) {
  return {{"vf_coef", c.vf_coef},
          {"ent_coef", c.ent_coef},
          {"n_steps", c.n_steps},
          {"batch_size", c.batch_size},
          {"clip_range", c.clip_range},
          {"discount_gamma", c.discount_gamma},
          {"gae_lambda", c.gae_lambda},
          {"lr_initial", c.lr_initial},
          {"lr_final", c.lr_final},
          {"epochs_per_update", c.epochs_per_update},
          {"max_grad_norm", c.max_grad_norm},
          {"optimizer", "Adam"}};
}

PPOConfig ppo_from_json(const nlohmann::json& j) {
  PPOConfig c;
  c.vf_coef = j.at("vf_coef").get<double>();
  c.ent_coef = j.at("ent_coef").get<double>();
  c.n_steps = j.at("n_steps").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.clip_range = j.at("clip_range").get<double>();
  c.discount_gamma = j.at("discount_gamma").get<double>();
  c.gae_lambda = j.at("gae_lambda").get<double>();
  c.lr_initial = j.at("lr_initial").get<double>();
  c.lr_final = j.at("lr_final").get<double>();
  c.epochs_per_update = j.at("epochs_per_update").get<int>();
  c.max_grad_norm = j.at("max_grad_norm").get<double>();
  c.validate();
  return c;
}

double linear_lr(const PPOConfig& c, double progress) {
  progress = std::clamp(progress, 0.0, 1.0);
  if (progress == 1.0) return c.lr_final;
  return c.lr_initial + (c.lr_final - c.lr_initial) * progress;
}

void RolloutBuffer::finish(double gamma, double lambda) {
  auto r = compute_gae(rewards, values, dones, last_values, num_envs, gamma, lambda);
  advantages = std::move(r.advantages);
  returns = std::move(r.returns);
}

nlohmann::json stats_to_json(const TrainStats& s) {
  return {{"policy_loss", s.policy_loss}, {"value_loss", s.value_loss}, {"entropy", s.entropy},
          {"clip_fraction", s.clip_fraction}, {"approx_kl", s.approx_kl}, {"lr", s.lr},
          {"minibatches", s.minibatches}};
}

TrainStats ppo_update(policy::PolicyNet& net, torch::optim::Adam& optimizer,
                      const RolloutBuffer& buf, const PPOConfig& cfg, double progress,
                      std::uint64_t seed) {
  cfg.validate();
  const auto n = static_cast<std::int64_t>(buf.size());
  if (n == 0 || buf.advantages.size() != buf.size())
    throw TrainError("ppo_update needs a finished, non-empty rollout buffer");
  const std::int64_t batch = std::min<std::int64_t>(cfg.batch_size, n);

  TrainStats stats;
  stats.lr = linear_lr(cfg, progress);
  for (auto& group : optimizer.param_groups())
    static_cast<torch::optim::AdamOptions&>(group.options()).lr(stats.lr);

  const auto dbl = torch::TensorOptions().dtype(torch::kFloat64);
  const auto old_log_prob = torch::tensor(buf.log_probs, dbl);
  const auto advantages = torch::tensor(buf.advantages, dbl);
  const auto returns = torch::tensor(buf.returns, dbl).to(torch::kFloat32);

  net->train();
  torch::manual_seed(seed);
  double pl_sum = 0, vl_sum = 0, ent_sum = 0, clip_sum = 0, kl_sum = 0;
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    const auto perm = torch::randperm(n, torch::TensorOptions().dtype(torch::kInt64));
    for (std::int64_t start = 0; start + batch <= n; start += batch) {
      const auto idx = perm.narrow(0, start, batch);
      const auto ev = net->evaluate_actions(buf.obs.index(idx), buf.actions.index_select(0, idx));
      auto adv = advantages.index_select(0, idx);
      if (batch > 1) adv = (adv - adv.mean()) / (adv.std() + 1e-8);
      const auto log_ratio = ev.log_prob - old_log_prob.index_select(0, idx);
      const auto ratio = torch::exp(log_ratio);
      const auto surrogate = torch::min(adv * ratio, adv * ratio.clamp(1.0 - cfg.clip_range, 1.0 + cfg.clip_range));
      const auto policy_loss = -surrogate.mean();
      const auto value_loss = torch::mse_loss(ev.value, returns.index_select(0, idx));
      const auto entropy = ev.entropy.mean();
      const auto loss = policy_loss + cfg.vf_coef * value_loss.to(torch::kFloat64) - cfg.ent_coef * entropy;

      const double loss_v = loss.item<double>();
      if (!std::isfinite(loss_v)) {
        std::ostringstream msg;
        msg << "non-finite PPO loss (policy " << policy_loss.item<double>() << ", value "
            << value_loss.item<double>() << ", entropy " << entropy.item<double>() << ", epoch "
            << epoch << ", row " << start << ")";
        throw TrainError(msg.str());
      }
      optimizer.zero_grad();
      loss.backward();
      torch::nn::utils::clip_grad_norm_(net->parameters(), cfg.max_grad_norm);
      optimizer.step();

      pl_sum += policy_loss.item<double>();
      vl_sum += value_loss.item<double>();
      ent_sum += entropy.item<double>();
      clip_sum += ((ratio - 1.0).abs() > cfg.clip_range).to(torch::kFloat64).mean().item<double>();
      kl_sum += ((ratio - 1.0) - log_ratio).mean().item<double>();
      ++stats.minibatches;
    }
  }
  net->eval();
  if (stats.minibatches > 0) {
    const double m = stats.minibatches;
    stats.policy_loss = pl_sum / m;
    stats.value_loss = vl_sum / m;
    stats.entropy = ent_sum / m;
    stats.clip_fraction = clip_sum / m;
    stats.approx_kl = kl_sum / m;
  }
  return stats;
}

}  // namespace tta::train
