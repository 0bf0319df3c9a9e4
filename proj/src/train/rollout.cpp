#include "tta/train/rollout.hpp"

#include <map>

#include "tta/train/builtin_ai.hpp"

namespace tta::train {

policy::PolicyNet OpponentCache::get(const PolicyPool& pool, int index) {
  const std::string& rel = pool.at(index).path;
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->first == rel) {
      entries_.splice(entries_.begin(), entries_, it);
      return entries_.front().second;
    }
  }
  auto net = policy::load_checkpoint(run_dir_ / rel);
  net->eval();
  entries_.emplace_front(rel, net);
  while (entries_.size() > capacity_) entries_.pop_back();
  return net;
}

RolloutCollector::RolloutCollector(std::shared_ptr<const env::Roster> roster,
                                   reward::RewardTerms terms, HybridSchedule schedule,
                                   std::filesystem::path run_dir, env::EnvOptions env_options)
    : roster_(std::move(roster)),
      env_options_(env_options),
      terms_(terms),
      schedule_(std::move(schedule)),
      opponents_(std::move(run_dir)) {
  schedule_.validate();
}

env::Side RolloutCollector::agent_side(const EnvSlot& s) const {
  return s.task.flipped ? env::Side::Right : env::Side::Left;
}

void RolloutCollector::reset_slot(int e) {
  EnvSlot& s = slots_[static_cast<std::size_t>(e)];
  const auto side = agent_side(s);
  const int left = side == env::Side::Left ? s.task.agent_character : s.task.opponent_character;
  const int right = side == env::Side::Left ? s.task.opponent_character : s.task.agent_character;
  s.env->reset(left, right, side);
  s.agent_obs = s.env->observe(side);
  s.running = EpisodeSummary{};
  s.running.env = e;
  s.running.task = s.task;
}

void RolloutCollector::begin(std::vector<TaskAssignment> tasks, const PolicyPool& pool,
                             std::uint64_t seed) {
  if (static_cast<int>(tasks.size()) != schedule_.num_envs)
    throw std::invalid_argument("one task per environment is required");
  pool_ = &pool;
  tasks_ = std::move(tasks);
  slots_.clear();
  slots_.resize(tasks_.size());
  env::EnvOptions opts = env_options_;
  opts.record_replay = false;
  for (std::size_t e = 0; e < tasks_.size(); ++e) {
    auto& s = slots_[e];
    s.env = std::make_unique<env::FightingEnv>(roster_, opts);
    s.task = tasks_[e];
    s.agent_rng.seed(derive_seed(seed, e, 0));
    s.opponent_rng.seed(derive_seed(seed, e, 1));
    s.task_rng.seed(derive_seed(seed, e, 2));
    reset_slot(static_cast<int>(e));
  }
  finished_.clear();
}

RolloutBuffer RolloutCollector::collect(policy::PolicyNet& net, const PPOConfig& cfg) {
  if (slots_.empty()) throw std::logic_error("collect before begin");
  const int n_envs = static_cast<int>(slots_.size());
  const int n_steps = cfg.n_steps;
  const std::int64_t rows = static_cast<std::int64_t>(n_envs) * n_steps;

  RolloutBuffer buf;
  buf.num_envs = n_envs;
  buf.n_steps = n_steps;
  const auto& first = slots_[0].agent_obs;
  buf.obs.image = torch::empty({rows, env::Image::kChannels, env::Image::kSize, env::Image::kSize}, torch::kUInt8);
  buf.obs.scalars = torch::empty({rows, static_cast<std::int64_t>(first.scalars.size())});
  buf.obs.history = torch::empty({rows, first.history_length(), env::kNumButtons});
  buf.obs.history_valid = torch::empty({rows}, torch::kInt64);
  buf.actions = torch::empty({rows, env::kNumButtons});
  buf.log_probs.reserve(rows);
  buf.values.reserve(rows);
  buf.rewards.reserve(rows);
  buf.dones.reserve(rows);

  net->eval();
  torch::NoGradGuard guard;
  for (int t = 0; t < n_steps; ++t) {
    std::vector<const env::Observation*> obs;
    for (auto& s : slots_) obs.push_back(&s.agent_obs);
    const auto batch = policy::make_batch(obs);
    const auto out = net->forward(batch);
    const auto probs = out.probs.to(torch::kFloat32).contiguous();
    const auto values = out.value.to(torch::kFloat64).contiguous();
    const std::int64_t row0 = static_cast<std::int64_t>(t) * n_envs;
    buf.obs.image.narrow(0, row0, n_envs).copy_(batch.image);
    buf.obs.scalars.narrow(0, row0, n_envs).copy_(batch.scalars);
    buf.obs.history.narrow(0, row0, n_envs).copy_(batch.history);
    buf.obs.history_valid.narrow(0, row0, n_envs).copy_(batch.history_valid);

    std::vector<env::ButtonVector> agent_abs(n_envs), opp_abs(n_envs);
    auto* act = buf.actions.data_ptr<float>();
    for (int e = 0; e < n_envs; ++e) {
      auto& s = slots_[static_cast<std::size_t>(e)];
      const auto sample = policy::sample_action(policy::probs_row(probs, e), s.agent_rng);
      for (int b = 0; b < env::kNumButtons; ++b)
        act[(row0 + e) * env::kNumButtons + b] = sample.buttons.test(b) ? 1.0f : 0.0f;
      buf.log_probs.push_back(sample.log_prob);
      buf.values.push_back(values[e].item<double>());
      agent_abs[static_cast<std::size_t>(e)] = env::to_own_frame(sample.buttons, agent_side(s));
    }

    // Opponents: the scripted AI per env, pool checkpoints batched per checkpoint.
    std::map<int, std::vector<int>> by_checkpoint;
    for (int e = 0; e < n_envs; ++e) {
      auto& s = slots_[static_cast<std::size_t>(e)];
      const auto opp_side = env::opposite(agent_side(s));
      if (s.task.mode == TaskMode::PvE)
        opp_abs[static_cast<std::size_t>(e)] = builtin_ai_policy(*roster_, s.env->state(), opp_side);
      else
        by_checkpoint[*s.task.opponent].push_back(e);
    }
    for (const auto& [ckpt, envs] : by_checkpoint) {
      std::vector<env::Observation> opp_obs;
      for (int e : envs) {
        auto& s = slots_[static_cast<std::size_t>(e)];
        opp_obs.push_back(s.env->observe(env::opposite(agent_side(s))));
      }
      auto opp_net = opponents_.get(*pool_, ckpt);
      const auto opp_probs = opp_net->forward(policy::make_batch(opp_obs)).probs.to(torch::kFloat32).contiguous();
      for (std::size_t k = 0; k < envs.size(); ++k) {
        auto& s = slots_[static_cast<std::size_t>(envs[k])];
        const auto a = policy::sample_action(policy::probs_row(opp_probs, static_cast<std::int64_t>(k)), s.opponent_rng);
        opp_abs[static_cast<std::size_t>(envs[k])] = env::to_own_frame(a.buttons, env::opposite(agent_side(s)));
      }
    }

    for (int e = 0; e < n_envs; ++e) {
      auto& s = slots_[static_cast<std::size_t>(e)];
      const auto side = agent_side(s);
      env::Transition tr;
      try {
        tr = s.env->step_only(agent_abs[static_cast<std::size_t>(e)], opp_abs[static_cast<std::size_t>(e)]);
      } catch (const std::exception& ex) {
        throw TrainError("environment " + std::to_string(e) + " failed: " + ex.what());
      }
      const auto& info = tr.info[env::index(side)];
      const double r = reward::compute(info, terms_).reward;
      buf.rewards.push_back(r);
      buf.dones.push_back(tr.done);
      s.running.reward += r;
      s.running.steps += 1;
      s.running.special_moves += info.special_move_triggered;
      if (tr.done) {
        s.running.won = info.won.value_or(false);
        finished_.push_back(s.running);
        resample_episode(s.task, schedule_, *pool_, roster_->size(), s.task_rng);
        reset_slot(e);
      } else {
        s.agent_obs = s.env->observe(side);
      }
    }
  }

  std::vector<const env::Observation*> obs;
  for (auto& s : slots_) obs.push_back(&s.agent_obs);
  const auto last = net->forward(policy::make_batch(obs)).value.to(torch::kFloat64).contiguous();
  buf.last_values.assign(last.data_ptr<double>(), last.data_ptr<double>() + n_envs);
  buf.finish(cfg.discount_gamma, cfg.gae_lambda);
  return buf;
}

std::vector<EpisodeSummary> RolloutCollector::take_episodes() {
  auto out = std::move(finished_);
  finished_.clear();
  return out;
}

}  // namespace tta::train
