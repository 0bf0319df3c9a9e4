#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "tta/env/roster.hpp"
#include "tta/policy/spec.hpp"
#include "tta/train/ppo.hpp"
#include "tta/train/schedule.hpp"

namespace tta::train {

inline constexpr int kManifestFormatVersion = 1;

struct TrainConfig {
  std::string profile = "default";  // built-in profile name or profile file
  HybridSchedule schedule;
  PPOConfig ppo;
  policy::PolicySpec spec;          // scalar_dim 0 means "derive from the roster"
  int iterations = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int eval_matches = 8;             // per iteration, against the built-in AI
  std::function<void(const nlohmann::json&)> on_progress;
};

/// Runs (or resumes) hybrid PPO training. Each iteration assigns tasks,
/// collects ceil(steps_per_iteration / (num_envs * n_steps)) rollouts with a
/// PPO update after each, evaluates against the built-in AI, writes
/// <out>/pool/<iter>_<eval>.ckpt and rewrites <out>/manifest.json.
/// A run directory with an existing manifest continues after its last
/// completed iteration; a manifest with different settings is rejected.
PolicyPool train(const TrainConfig& config, const env::Roster& roster = env::default_roster());

nlohmann::json load_manifest(const std::filesystem::path& run_dir);
PolicyPool pool_from_manifest(const nlohmann::json& manifest);

/// The timesteps the schedule runs per iteration after rounding up to whole rollouts.
std::int64_t rollouts_per_iteration(const HybridSchedule& s, const PPOConfig& p);

}  // namespace tta::train
