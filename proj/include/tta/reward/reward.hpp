#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/state.hpp"

namespace tta::reward {

/// Coefficients of the modular reward. Every field is required when read from
/// a profile file.
struct RewardTerms {
  double reward_scale = 0.0;
  double raw_reward_coefficient = 0.0;
  double special_move_bonus = 0.0;
  double projectile_bonus = 0.0;
  double distance_bonus = 0.0;
  double special_move_reward = 0.0;
  double projectile_reward = 0.0;
  double distance_reward = 0.0;
  double in_air_reward = 0.0;
  double time_reward = 0.0;
  double cost_coefficient = 0.0;
  double special_move_cost = 0.0;
  double regular_attack_cost = 0.0;
  double jump_cost = 0.0;
  double vulnerable_frame_cost = 0.0;

  bool operator==(const RewardTerms&) const = default;
};

inline constexpr std::array<std::string_view, 15> kTermNames = {
    "reward_scale",        "raw_reward_coefficient", "special_move_bonus",
    "projectile_bonus",    "distance_bonus",         "special_move_reward",
    "projectile_reward",   "distance_reward",        "in_air_reward",
    "time_reward",         "cost_coefficient",       "special_move_cost",
    "regular_attack_cost", "jump_cost",              "vulnerable_frame_cost"};

/// Field access in kTermNames order.
std::array<double, 15> to_array(const RewardTerms& t);
RewardTerms from_array(const std::array<double, 15>& values);

/// Unscaled components; `total` already includes reward_scale and subtracts
/// cost_total.
struct RewardBreakdown {
  double hp_raw = 0.0;
  double hp_special_bonus = 0.0;
  double hp_projectile_bonus = 0.0;
  double hp_distance_bonus = 0.0;
  double event_special = 0.0;
  double event_projectile = 0.0;
  double distance = 0.0;
  double in_air = 0.0;
  double time = 0.0;
  double cost_total = 0.0;
  double total = 0.0;
};

struct RewardResult {
  double reward = 0.0;
  RewardBreakdown breakdown;
};

class RewardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RewardResult compute(const env::StepInfo& info, const RewardTerms& terms);

/// The seven published profiles plus "aggressive" (default with a negative
/// distance reward).
const std::vector<std::string>& builtin_profile_names();
bool is_builtin_profile(std::string_view name);

/// Built-in name or a path to a flat JSON object holding exactly the 15 term
/// names. Throws RewardError on unknown names or malformed/incomplete files.
RewardTerms load_profile(std::string_view name_or_path);

nlohmann::json terms_to_json(const RewardTerms& terms);
RewardTerms terms_from_json(const nlohmann::json& doc);

/// StepInfo as a flat JSON object; every field is required on read.
nlohmann::json step_info_to_json(const env::StepInfo& info);
env::StepInfo step_info_from_json(const nlohmann::json& doc);

}  // namespace tta::reward
