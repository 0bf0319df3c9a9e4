#pragma once

#include <filesystem>
#include <list>
#include <memory>
#include <vector>

#include "tta/env/environment.hpp"
#include "tta/policy/distribution.hpp"
#include "tta/policy/policy_net.hpp"
#include "tta/reward/reward.hpp"
#include "tta/train/ppo.hpp"
#include "tta/train/schedule.hpp"

namespace tta::train {

/// Loads pool checkpoints on demand and keeps the most recently used ones.
class OpponentCache {
 public:
  OpponentCache(std::filesystem::path run_dir, std::size_t capacity = 8)
      : run_dir_(std::move(run_dir)), capacity_(capacity) {}
  policy::PolicyNet get(const PolicyPool& pool, int index);

 private:
  std::filesystem::path run_dir_;
  std::size_t capacity_;
  std::list<std::pair<std::string, policy::PolicyNet>> entries_;
};

struct EpisodeSummary {
  int env = 0;
  TaskAssignment task;
  double reward = 0.0;
  int steps = 0;
  bool won = false;
  int special_moves = 0;
};

/// Drives num_envs environments for the agent, with each env's opponent set
/// by its task (built-in AI or a sampled pool checkpoint).
class RolloutCollector {
 public:
  RolloutCollector(std::shared_ptr<const env::Roster> roster, reward::RewardTerms terms,
                   HybridSchedule schedule, std::filesystem::path run_dir,
                   env::EnvOptions env_options = {});

  /// Resets every env for a new iteration with the given tasks; per-env
  /// sampling streams derive from `seed`.
  void begin(std::vector<TaskAssignment> tasks, const PolicyPool& pool, std::uint64_t seed);

  /// n_steps decision steps in every env; the buffer is GAE-finished.
  RolloutBuffer collect(policy::PolicyNet& net, const PPOConfig& config);

  const std::vector<TaskAssignment>& tasks() const { return tasks_; }
  std::vector<EpisodeSummary> take_episodes();

 private:
  struct EnvSlot {
    std::unique_ptr<env::FightingEnv> env;
    TaskAssignment task;
    policy::Rng agent_rng;
    policy::Rng opponent_rng;
    policy::Rng task_rng;
    env::Observation agent_obs;
    EpisodeSummary running;
  };

  void reset_slot(int e);
  env::Side agent_side(const EnvSlot& s) const;

  std::shared_ptr<const env::Roster> roster_;
  env::EnvOptions env_options_;
  reward::RewardTerms terms_;
  HybridSchedule schedule_;
  OpponentCache opponents_;
  const PolicyPool* pool_ = nullptr;
  std::vector<TaskAssignment> tasks_;
  std::vector<EnvSlot> slots_;
  std::vector<EpisodeSummary> finished_;
};

}  // namespace tta::train
