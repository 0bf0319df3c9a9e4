#include "tta/train/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace tta::train {

PoolMode parse_pool_mode(const std::string& text) {
  if (text == "All") return {text};
  if (text.rfind("top_", 0) == 0 && text.size() > 4 &&
      std::all_of(text.begin() + 4, text.end(), [](char c) { return std::isdigit(c) != 0; }))
    return {text};
  throw std::invalid_argument("unknown pool mode '" + text + "' (expected All or top_N)");
}

void HybridSchedule::validate() const {
  if (!(self_play_ratio >= 0.0 && self_play_ratio <= 1.0))
    throw std::invalid_argument("self_play_ratio must lie in [0, 1]");
  if (num_envs < 1) throw std::invalid_argument("num_envs must be at least 1");
  if (!(character_flip_rate >= 0.0 && character_flip_rate <= 1.0))
    throw std::invalid_argument("character_flip_rate must lie in [0, 1]");
  if (steps_per_iteration < 1) throw std::invalid_argument("steps_per_iteration must be positive");
  if (!policy_pool_update.is_all() || !opponent_selection.is_all())
    throw std::invalid_argument("only the All pool mode is implemented");
}

nlohmann::json schedule_to_json(const HybridSchedule& s) {
  return {{"self_play_ratio", s.self_play_ratio},
          {"num_envs", s.num_envs},
          {"character_flip_rate", s.character_flip_rate},
          {"steps_per_iteration", s.steps_per_iteration},
          {"policy_pool_update", s.policy_pool_update.name},
          {"opponent_selection", s.opponent_selection.name}};
}

HybridSchedule schedule_from_json(const nlohmann::json& j) {
  HybridSchedule s;
  s.self_play_ratio = j.at("self_play_ratio").get<double>();
  s.num_envs = j.at("num_envs").get<int>();
  s.character_flip_rate = j.at("character_flip_rate").get<double>();
  s.steps_per_iteration = j.at("steps_per_iteration").get<std::int64_t>();
  s.policy_pool_update = parse_pool_mode(j.at("policy_pool_update").get<std::string>());
  s.opponent_selection = parse_pool_mode(j.at("opponent_selection").get<std::string>());
  return s;
}

void PolicyPool::append(PoolEntry entry) { entries_.push_back(std::move(entry)); }

nlohmann::json PolicyPool::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries_)
    arr.push_back({{"iteration", e.iteration}, {"path", e.path}, {"profile", e.profile}, {"eval", e.eval}});
  return arr;
}

PolicyPool PolicyPool::from_json(const nlohmann::json& doc) {
  PolicyPool p;
  for (const auto& j : doc) {
    PoolEntry e;
    e.iteration = j.at("iteration").get<int>();
    e.path = j.at("path").get<std::string>();
    e.profile = j.at("profile").get<std::string>();
    e.eval = j.value("eval", nlohmann::json::object());
    p.append(std::move(e));
  }
  return p;
}

std::string to_string(TaskMode m) { return m == TaskMode::PvE ? "pve" : "self_play"; }

nlohmann::json task_to_json(const TaskAssignment& t) {
  return {{"mode", to_string(t.mode)},
          {"opponent", t.opponent ? nlohmann::json(*t.opponent) : nlohmann::json(nullptr)},
          {"agent_character", t.agent_character},
          {"opponent_character", t.opponent_character},
          {"flipped", t.flipped}};
}

void resample_episode(TaskAssignment& t, const HybridSchedule& schedule, const PolicyPool& pool,
                      int roster_size, Rng& rng) {
  std::uniform_int_distribution<int> character(0, roster_size - 1);
  std::bernoulli_distribution flip(schedule.character_flip_rate);
  t.opponent.reset();
  if (t.mode == TaskMode::SelfPlay) {
    if (pool.empty()) throw std::logic_error("self-play task without a policy pool");
    t.opponent = std::uniform_int_distribution<int>(0, pool.size() - 1)(rng);
  }
  t.agent_character = character(rng);
  t.opponent_character = character(rng);
  t.flipped = flip(rng);
}

std::vector<TaskAssignment> assign_tasks(const HybridSchedule& schedule, const PolicyPool& pool,
                                         int roster_size, Rng& rng) {
  schedule.validate();
  const int n = schedule.num_envs;
  const int self_play =
      pool.empty() ? 0 : static_cast<int>(std::lround(schedule.self_play_ratio * n));
  std::vector<int> slots(n);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);

  std::vector<TaskAssignment> tasks(n);
  for (int k = 0; k < self_play; ++k) tasks[slots[k]].mode = TaskMode::SelfPlay;
  for (auto& t : tasks) resample_episode(t, schedule, pool, roster_size, rng);
  return tasks;
}

std::string checkpoint_stem(int iteration, double eval_score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::round(eval_score * 1000.0) / 1000.0);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return std::to_string(iteration) + "_" + s;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace tta::train
