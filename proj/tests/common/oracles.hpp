#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "tta/env/command.hpp"
#include "tta/env/roster.hpp"
#include "tta/env/state.hpp"
#include "tta/reward/reward.hpp"

namespace tta::testing {

/// Reward as one expression, written straight from the composition rule.
inline double reward_oracle(const env::StepInfo& i, const reward::RewardTerms& t) {
  return t.reward_scale *
         (t.raw_reward_coefficient * (double(i.damage_dealt) - double(i.damage_taken)) +
          t.special_move_bonus * i.damage_dealt_special +
          t.projectile_bonus * i.damage_dealt_projectile +
          t.distance_bonus * i.distance_norm * i.damage_dealt +
          t.special_move_reward * (i.special_move_triggered ? 1.0 : 0.0) +
          t.projectile_reward * (i.projectile_triggered ? 1.0 : 0.0) +
          t.distance_reward * (2.0 * i.distance_norm - 1.0) +
          t.in_air_reward * (i.in_air ? 1.0 : 0.0) + t.time_reward -
          t.cost_coefficient * (t.special_move_cost * (i.special_move_triggered ? 1.0 : 0.0) +
                                t.regular_attack_cost * (i.regular_attack_triggered ? 1.0 : 0.0) +
                                t.jump_cost * (i.jump_triggered ? 1.0 : 0.0) +
                                t.vulnerable_frame_cost * i.vulnerable_frames));
}

/// Exhaustive matcher: tries every ordered choice of entries inside the
/// window for the motion, demanding the trigger edge on the final frame.
inline bool motion_present(const std::vector<env::CommandEntry>& in_window,
                           const std::vector<int>& motion, std::size_t from, std::size_t k) {
  if (k == motion.size()) return true;
  for (std::size_t i = from; i < in_window.size(); ++i)
    if (in_window[i].direction == motion[k] && motion_present(in_window, motion, i + 1, k + 1))
      return true;
  return false;
}

inline std::optional<int> special_oracle(const std::vector<env::CommandEntry>& entries,
                                         const env::CharacterSpec& spec, std::int64_t now,
                                         int charge, int window) {
  if (entries.empty() || entries.back().frame != now) return std::nullopt;
  const std::uint8_t pressed = entries.back().pressed;
  std::vector<env::CommandEntry> in_window;
  for (const auto& e : entries)
    if (e.frame > now - window && e.frame <= now) in_window.push_back(e);
  for (std::size_t m = 0; m < spec.specials.size(); ++m) {
    const auto& mv = spec.specials[m];
    const bool punch = (pressed & 0b000111) != 0;
    const bool kick = (pressed & 0b111000) != 0;
    const bool edge = mv.trigger == env::TriggerClass::Punch ? punch : kick;
    if (!edge) continue;
    if (mv.charge_frames > 0 && charge < mv.charge_frames) continue;
    if (motion_present(in_window, mv.motion, 0, 0)) return static_cast<int>(m);
  }
  return std::nullopt;
}

/// Mirror built field by field from the definition, independent of env::mirror.
inline env::GameState mirror_oracle(const env::GameState& s) {
  env::GameState m = s;
  for (int side = 0; side < 2; ++side) {
    env::FighterState f = s.fighters[1 - side];
    f.x = 400 - f.x;
    f.vx = -f.vx;
    f.facing = -f.facing;
    m.fighters[side] = f;
    env::Projectile p = s.projectiles[1 - side];
    if (p.active) {
      p.owner = side == 0 ? env::Side::Left : env::Side::Right;
      p.x = 400 - p.x;
      p.vx = -p.vx;
    } else {
      p = env::Projectile{side == 0 ? env::Side::Left : env::Side::Right};
    }
    m.projectiles[side] = p;
  }
  if (s.winner == env::Winner::Left) m.winner = env::Winner::Right;
  if (s.winner == env::Winner::Right) m.winner = env::Winner::Left;
  return m;
}

}  // namespace tta::testing
