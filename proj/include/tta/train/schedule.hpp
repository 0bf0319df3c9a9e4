#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tta::train {

using Rng = std::mt19937_64;

/// "All" keeps every checkpoint / samples from the whole pool. "top_N" is
/// accepted by the parser but not implemented.
struct PoolMode {
  std::string name = "All";
  bool is_all() const { return name == "All"; }
};
PoolMode parse_pool_mode(const std::string& text);

struct HybridSchedule {
  double self_play_ratio = 0.7;
  int num_envs = 12;
  double character_flip_rate = 0.5;
  std::int64_t steps_per_iteration = 200000;
  PoolMode policy_pool_update;
  PoolMode opponent_selection;

  void validate() const;
};

nlohmann::json schedule_to_json(const HybridSchedule& s);
HybridSchedule schedule_from_json(const nlohmann::json& doc);

struct PoolEntry {
  int iteration = 0;
  std::string path;  // relative to the run directory
  std::string profile;
  nlohmann::json eval = nlohmann::json::object();
  bool operator==(const PoolEntry&) const = default;
};

/// Ordered, append-only list of historical checkpoints.
class PolicyPool {
 public:
  void append(PoolEntry entry);
  const std::vector<PoolEntry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const PoolEntry& at(int i) const { return entries_.at(static_cast<std::size_t>(i)); }

  nlohmann::json to_json() const;
  static PolicyPool from_json(const nlohmann::json& doc);

 private:
  std::vector<PoolEntry> entries_;
};

enum class TaskMode { PvE, SelfPlay };
std::string to_string(TaskMode m);

struct TaskAssignment {
  TaskMode mode = TaskMode::PvE;
  std::optional<int> opponent;  // pool index for self-play
  int agent_character = 0;
  int opponent_character = 0;
  bool flipped = false;  // agent spawns on the right

  bool operator==(const TaskAssignment&) const = default;
};

nlohmann::json task_to_json(const TaskAssignment& t);

/// Exactly round(ratio * num_envs) self-play tasks (zero with an empty pool),
/// placed at random env slots; opponents uniform over the whole pool;
/// characters uniform over the roster; each env flipped independently.
std::vector<TaskAssignment> assign_tasks(const HybridSchedule& schedule, const PolicyPool& pool,
                                         int roster_size, Rng& rng);

/// Redraws opponent, characters and flip for a new episode, keeping the mode.
void resample_episode(TaskAssignment& task, const HybridSchedule& schedule,
                      const PolicyPool& pool, int roster_size, Rng& rng);

/// Name of a pool checkpoint: "<iteration>_<eval>" with eval rounded to
/// three decimals and trailing zeros dropped (e.g. "1_0.22").
std::string checkpoint_stem(int iteration, double eval_score);

/// Deterministic seed for a named sub-stream of a run.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace tta::train
