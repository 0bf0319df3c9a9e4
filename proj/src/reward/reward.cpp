#include "tta/reward/reward.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace tta::reward {

std::array<double, 15> to_array(const RewardTerms& t) {
  return {t.reward_scale,        t.raw_reward_coefficient, t.special_move_bonus,
          t.projectile_bonus,    t.distance_bonus,         t.special_move_reward,
          t.projectile_reward,   t.distance_reward,        t.in_air_reward,
          t.time_reward,         t.cost_coefficient,       t.special_move_cost,
          t.regular_attack_cost, t.jump_cost,              t.vulnerable_frame_cost};
}

RewardTerms from_array(const std::array<double, 15>& v) {
  RewardTerms t;
  t.reward_scale = v[0];
  t.raw_reward_coefficient = v[1];
  t.special_move_bonus = v[2];
  t.projectile_bonus = v[3];
  t.distance_bonus = v[4];
  t.special_move_reward = v[5];
  t.projectile_reward = v[6];
  t.distance_reward = v[7];
  t.in_air_reward = v[8];
  t.time_reward = v[9];
  t.cost_coefficient = v[10];
  t.special_move_cost = v[11];
  t.regular_attack_cost = v[12];
  t.jump_cost = v[13];
  t.vulnerable_frame_cost = v[14];
  return t;
}

RewardResult compute(const env::StepInfo& info, const RewardTerms& t) {
  const auto indicator = [](bool b) { return b ? 1.0 : 0.0; };
  const double dealt = info.damage_dealt;

  RewardBreakdown b;
  b.hp_raw = t.raw_reward_coefficient * (dealt - info.damage_taken);
  b.hp_special_bonus = t.special_move_bonus * info.damage_dealt_special;
  b.hp_projectile_bonus = t.projectile_bonus * info.damage_dealt_projectile;
  b.hp_distance_bonus = t.distance_bonus * info.distance_norm * dealt;
  b.event_special = t.special_move_reward * indicator(info.special_move_triggered);
  b.event_projectile = t.projectile_reward * indicator(info.projectile_triggered);
  b.distance = t.distance_reward * (2.0 * info.distance_norm - 1.0);
  b.in_air = t.in_air_reward * indicator(info.in_air);
  b.time = t.time_reward;
  b.cost_total = t.cost_coefficient *
                 (t.special_move_cost * indicator(info.special_move_triggered) +
                  t.regular_attack_cost * indicator(info.regular_attack_triggered) +
                  t.jump_cost * indicator(info.jump_triggered) +
                  t.vulnerable_frame_cost * info.vulnerable_frames);

  const double sum = b.hp_raw + b.hp_special_bonus + b.hp_projectile_bonus +
                     b.hp_distance_bonus + b.event_special + b.event_projectile + b.distance +
                     b.in_air + b.time - b.cost_total;
  b.total = t.reward_scale * sum;
  return {b.total, b};
}

namespace {

// Columns of the published reward-term table, in kTermNames order.
const std::map<std::string, std::array<double, 15>, std::less<>>& profile_table() {
  static const std::map<std::string, std::array<double, 15>, std::less<>> table = {
      {"default", {0.001, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}},
      {"special_move",
       {0.001, 1.0, 3.0, 1.0, 2.0, 10.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.05}},
      {"defensive",
       {0.001, 1.0, 1.0, 1.0, 0.0, 0.0, 10.0, 0.02, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}},
      {"air", {0.001, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.05, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}},
      {"newbie", {0.001, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 30.0, 0.0, 0.0, 0.0}},
      {"coward", {0.001, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.0, 3.0, 5.0, 1.0, 0.0, 0.0}},
      {"key_spamming",
       {0.001, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, -3.0, 2.0, 0.0, 0.0}},
      {"aggressive",
       {0.001, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_profile_names() {
  static const std::vector<std::string> names = {"default", "special_move", "defensive",
                                                 "air",     "newbie",       "coward",
                                                 "key_spamming", "aggressive"};
  return names;
}

bool is_builtin_profile(std::string_view name) {
  return profile_table().find(name) != profile_table().end();
}

nlohmann::json terms_to_json(const RewardTerms& terms) {
  nlohmann::json doc = nlohmann::json::object();
  const auto values = to_array(terms);
  for (std::size_t i = 0; i < kTermNames.size(); ++i) doc[std::string(kTermNames[i])] = values[i];
  return doc;
}

RewardTerms terms_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw RewardError("reward profile must be a JSON object");
  std::array<double, 15> values{};
  for (std::size_t i = 0; i < kTermNames.size(); ++i) {
    const std::string key(kTermNames[i]);
    if (!doc.contains(key)) throw RewardError("reward profile is missing '" + key + "'");
    if (!doc.at(key).is_number()) throw RewardError("reward term '" + key + "' must be a number");
    values[i] = doc.at(key).get<double>();
  }
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kTermNames.begin(), kTermNames.end(), key) == kTermNames.end())
      throw RewardError("unknown reward term '" + key + "'");
  }
  RewardTerms t = from_array(values);
  if (t.reward_scale == 0.0) throw RewardError("reward_scale must be non-zero");
  return t;
}

RewardTerms load_profile(std::string_view name_or_path) {
  if (auto it = profile_table().find(name_or_path); it != profile_table().end())
    return from_array(it->second);
  const std::filesystem::path path(name_or_path);
  std::ifstream in(path);
  if (!in) throw RewardError("unknown reward profile '" + std::string(name_or_path) + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw RewardError("malformed reward profile " + path.string() + ": " + e.what());
  }
  return terms_from_json(doc);
}

nlohmann::json step_info_to_json(const env::StepInfo& i) {
  nlohmann::json won = i.won ? nlohmann::json(*i.won) : nlohmann::json(nullptr);
  return {{"damage_dealt", i.damage_dealt},
          {"damage_taken", i.damage_taken},
          {"damage_dealt_special", i.damage_dealt_special},
          {"damage_dealt_projectile", i.damage_dealt_projectile},
          {"special_move_triggered", i.special_move_triggered},
          {"projectile_triggered", i.projectile_triggered},
          {"regular_attack_triggered", i.regular_attack_triggered},
          {"jump_triggered", i.jump_triggered},
          {"in_air", i.in_air},
          {"vulnerable_frames", i.vulnerable_frames},
          {"distance_norm", i.distance_norm},
          {"round_over", i.round_over},
          {"won", won}};
}

env::StepInfo step_info_from_json(const nlohmann::json& doc) {
  static const char* required[] = {"damage_dealt",          "damage_taken",
                                   "damage_dealt_special",  "damage_dealt_projectile",
                                   "special_move_triggered", "projectile_triggered",
                                   "regular_attack_triggered", "jump_triggered",
                                   "in_air",                "vulnerable_frames",
                                   "distance_norm"};
  for (const char* key : required)
    if (!doc.contains(key)) throw RewardError(std::string("step info is missing '") + key + "'");
  try {
    env::StepInfo i;
    i.damage_dealt = doc.at("damage_dealt").get<int>();
    i.damage_taken = doc.at("damage_taken").get<int>();
    i.damage_dealt_special = doc.at("damage_dealt_special").get<int>();
    i.damage_dealt_projectile = doc.at("damage_dealt_projectile").get<int>();
    i.special_move_triggered = doc.at("special_move_triggered").get<bool>();
    i.projectile_triggered = doc.at("projectile_triggered").get<bool>();
    i.regular_attack_triggered = doc.at("regular_attack_triggered").get<bool>();
    i.jump_triggered = doc.at("jump_triggered").get<bool>();
    i.in_air = doc.at("in_air").get<bool>();
    i.vulnerable_frames = doc.at("vulnerable_frames").get<int>();
    i.distance_norm = doc.at("distance_norm").get<double>();
    i.round_over = doc.value("round_over", false);
    if (doc.contains("won") && !doc.at("won").is_null()) i.won = doc.at("won").get<bool>();
    return i;
  } catch (const nlohmann::json::exception& e) {
    throw RewardError(std::string("malformed step info: ") + e.what());
  }
}

}  // namespace tta::reward
