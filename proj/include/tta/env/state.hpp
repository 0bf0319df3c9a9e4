#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "tta/env/buttons.hpp"
#include "tta/env/command.hpp"

namespace tta::env {

enum class Status : std::uint8_t {
  Idle,
  Walking,
  Crouching,
  Jumping,
  Attacking,
  Blocking,
  Hitstun,
  Stunned,
  SpecialRecovery,
};
inline constexpr int kNumStatuses = 9;

std::string_view to_string(Status s);

enum class MoveKind : std::uint8_t { None, Normal, Special };

struct FighterState {
  int character_id = 0;
  int hp = 0;
  int x = 0;
  int y = 0;
  int vx = 0;
  int vy = 0;
  int facing = 1;  // +1 faces increasing x
  Status status = Status::Idle;
  int status_frames_left = 0;
  int invincible_frames_left = 0;
  int charge_counter = 0;

  // Active move bookkeeping.
  MoveKind move_kind = MoveKind::None;
  int move_index = 0;  // normal: attack button offset 0..5; special: index into specials
  int move_frame = 0;  // frames elapsed since the move started
  bool move_connected = false;
  bool air_action_used = false;

  int last_direction = 5;        // facing-relative code sampled this frame
  std::uint8_t held_attacks = 0;  // attack buttons held last frame, for edge detection
  CommandBuffer commands;

  bool airborne() const { return y > 0 || status == Status::Jumping; }
  bool vulnerable() const {
    return status == Status::Hitstun || status == Status::Stunned ||
           status == Status::SpecialRecovery;
  }
  bool actionable() const {
    return y == 0 && (status == Status::Idle || status == Status::Walking ||
                      status == Status::Crouching);
  }

  bool operator==(const FighterState&) const = default;
};

struct Projectile {
  Side owner = Side::Left;
  int x = 0;
  int y = 0;
  int vx = 0;
  int damage = 0;
  bool active = false;
  bool operator==(const Projectile&) const = default;
};

enum class Winner : std::uint8_t { None, Left, Right, Draw };

struct GameState {
  std::array<FighterState, 2> fighters;
  std::array<Projectile, 2> projectiles{};  // slot = owner side
  int round_frames_left = 0;
  std::int64_t frame_count = 0;
  bool done = false;
  Winner winner = Winner::None;

  FighterState& fighter(Side s) { return fighters[index(s)]; }
  const FighterState& fighter(Side s) const { return fighters[index(s)]; }
  int active_projectiles() const;

  bool operator==(const GameState&) const = default;
};

/// Per-side events and measurements for one decision step.
struct StepInfo {
  int damage_dealt = 0;
  int damage_taken = 0;
  int damage_dealt_special = 0;
  int damage_dealt_projectile = 0;
  bool special_move_triggered = false;
  bool projectile_triggered = false;
  bool regular_attack_triggered = false;
  bool jump_triggered = false;
  bool in_air = false;
  int vulnerable_frames = 0;
  double distance_norm = 0.0;
  bool round_over = false;
  std::optional<bool> won;

  bool operator==(const StepInfo&) const = default;
};

/// 64-bit FNV-1a over every field that influences future frames.
std::uint64_t state_hash(const GameState& state);

/// Side-swap mirror: exchange the fighters, reflect x about the arena centre,
/// negate horizontal velocity and facing.
GameState mirror(const GameState& state);

}  // namespace tta::env
