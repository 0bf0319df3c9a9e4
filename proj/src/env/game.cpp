#include "tta/env/game.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

namespace tta::env {

namespace {

using namespace config;

constexpr int kLeftWall = kBodyHalfWidth;
constexpr int kRightWall = kArenaWidth - kBodyHalfWidth;

int clamp_x(int x) { return std::clamp(x, kLeftWall, kRightWall); }
int sign(int v) { return (v > 0) - (v < 0); }

enum class HitKind { Normal, Special, Projectile };

struct Hit {
  int attacker = 0;
  int defender = 0;
  int damage = 0;
  HitKind kind = HitKind::Normal;
  bool blockable = true;
  int push_direction = 0;  // direction the defender is knocked back
};

void clear_move(FighterState& f) {
  f.move_kind = MoveKind::None;
  f.move_index = 0;
  f.move_frame = 0;
  f.move_connected = false;
}

void settle(FighterState& f) {
  f.status = f.y > 0 ? Status::Jumping : Status::Idle;
  f.status_frames_left = 0;
}

int strongest_attack(std::uint8_t rising) {
  // HP, HK, MP, MK, LP, LK
  constexpr int order[] = {2, 5, 1, 4, 0, 3};
  for (int o : order)
    if (rising & (1u << o)) return o;
  return 0;
}

struct MoveWindow {
  int startup = 0;
  int active = 0;
  int recovery = 0;
};

MoveWindow window_of(const CharacterSpec& spec, const FighterState& f) {
  if (f.move_kind == MoveKind::Special) {
    const auto& m = spec.specials.at(f.move_index);
    return {m.startup, m.active, m.recovery_frames};
  }
  const auto& n = spec.normals.at(f.move_index);
  return {n.startup, n.active, n.recovery};
}

void process_input(const CharacterSpec& spec, FighterState& f, ButtonVector input,
                   std::int64_t frame, bool projectile_slot_free, StepInfo& ev) {
  input = input.masked();
  const int dir = relative_direction(input, f.facing);
  const std::uint8_t attacks = input.attack_bits();
  const auto rising = static_cast<std::uint8_t>(attacks & ~f.held_attacks);
  f.commands.record(frame, dir, rising);
  f.last_direction = dir;
  f.held_attacks = attacks;

  if (f.actionable()) {
    if (rising != 0) {
      auto special = detect_special(f.commands, spec, frame, f.charge_counter);
      if (special && spec.specials[*special].spawns_projectile && !projectile_slot_free)
        special.reset();
      clear_move(f);
      f.status = Status::Attacking;
      f.vx = 0;
      if (special) {
        f.move_kind = MoveKind::Special;
        f.move_index = *special;
        f.invincible_frames_left = spec.specials[*special].invincibility_frames;
        ev.special_move_triggered = true;
      } else {
        f.move_kind = MoveKind::Normal;
        f.move_index = strongest_attack(rising);
        ev.regular_attack_triggered = true;
      }
    } else if (is_up(dir)) {
      f.status = Status::Jumping;
      f.vy = spec.jump_impulse;
      f.vx = forward_component(dir) * f.facing * spec.jump_speed_x;
      ev.jump_triggered = true;
    } else if (is_down(dir)) {
      f.status = Status::Crouching;
      f.vx = 0;
    } else if (forward_component(dir) != 0) {
      f.status = Status::Walking;
      f.vx = forward_component(dir) * f.facing * spec.walk_speed;
    } else {
      f.status = Status::Idle;
      f.vx = 0;
    }
  } else if (f.status == Status::Jumping && f.y > 0 && rising != 0 && !f.air_action_used) {
    clear_move(f);
    f.status = Status::Attacking;
    f.move_kind = MoveKind::Normal;
    f.move_index = strongest_attack(rising);
    f.air_action_used = true;
    ev.regular_attack_triggered = true;
  }

  if (is_back(dir))
    f.charge_counter = std::min(f.charge_counter + 1, kChargeCap);
  else
    f.charge_counter = std::max(0, f.charge_counter - kChargeDecay);
}

void apply_physics(const CharacterSpec& spec, FighterState& f) {
  if (f.y > 0 || f.vy != 0) {
    f.x += f.vx;
    f.y += f.vy;
    f.vy -= kGravity;
    if (f.y <= 0) {
      f.y = 0;
      f.vy = 0;
      f.vx = 0;
      f.air_action_used = false;
      if (f.status == Status::Jumping || f.status == Status::Attacking) {
        clear_move(f);
        settle(f);
      }
    }
  } else {
    switch (f.status) {
      case Status::Walking:
        f.x += f.vx;
        break;
      case Status::Attacking:
        if (f.move_kind == MoveKind::Special) {
          const auto& m = spec.specials.at(f.move_index);
          if (m.forward_speed > 0 && f.move_frame >= m.startup &&
              f.move_frame < m.startup + m.active)
            f.x += f.facing * m.forward_speed;
        }
        break;
      case Status::Hitstun:
      case Status::Stunned:
      case Status::Blocking:
        f.x += f.vx;
        f.vx -= sign(f.vx);
        break;
      default:
        break;
    }
  }
  f.x = clamp_x(f.x);
}

void separate(FighterState& a, FighterState& b) {
  if (a.y > 0 || b.y > 0) return;
  const int dx = b.x - a.x;
  if (std::abs(dx) >= kMinSeparation) return;
  const int overlap = kMinSeparation - std::abs(dx);
  const int dir_a = dx > 0 ? -1 : dx < 0 ? 1 : -a.facing;
  const int dir_b = dx > 0 ? 1 : dx < 0 ? -1 : -b.facing;
  const int push = (overlap + 1) / 2;
  const int want_a = a.x + dir_a * push;
  const int want_b = b.x + dir_b * push;
  a.x = clamp_x(want_a);
  b.x = clamp_x(want_b);
  if (dir_a == dir_b || std::abs(b.x - a.x) >= kMinSeparation) return;
  if (a.x != want_a) b.x = clamp_x(a.x + dir_b * kMinSeparation);
  if (b.x != want_b) a.x = clamp_x(b.x + dir_a * kMinSeparation);
}

// Advances the move timeline; returns the special to launch as a projectile
// on its first active frame.
std::optional<int> progress_move(const CharacterSpec& spec, FighterState& f) {
  if (f.status != Status::Attacking || f.move_kind == MoveKind::None) return std::nullopt;
  ++f.move_frame;
  const MoveWindow w = window_of(spec, f);
  std::optional<int> spawn;
  if (f.move_kind == MoveKind::Special && spec.specials.at(f.move_index).spawns_projectile &&
      f.move_frame == w.startup + 1)
    spawn = f.move_index;
  if (f.move_kind == MoveKind::Special && f.move_frame > w.startup + w.active) {
    clear_move(f);
    f.status = Status::SpecialRecovery;
    f.status_frames_left = w.recovery;
  } else if (f.move_kind == MoveKind::Normal && f.move_frame > w.startup + w.active + w.recovery) {
    clear_move(f);
    settle(f);
  }
  return spawn;
}

bool in_active_frames(const CharacterSpec& spec, const FighterState& f) {
  if (f.status != Status::Attacking || f.move_kind == MoveKind::None || f.move_connected)
    return false;
  const MoveWindow w = window_of(spec, f);
  return f.move_frame > w.startup && f.move_frame <= w.startup + w.active;
}

bool can_block(const FighterState& f) {
  return f.y == 0 && is_back(f.last_direction) &&
         (f.status == Status::Idle || f.status == Status::Walking ||
          f.status == Status::Crouching || f.status == Status::Blocking);
}

}  // namespace

GameState reset_state(const Roster& roster, int left_character, int right_character) {
  if (!roster.valid(left_character) || !roster.valid(right_character))
    throw EnvError("unknown character id (left " + std::to_string(left_character) + ", right " +
                   std::to_string(right_character) + ")");
  GameState s;
  const int ids[2] = {left_character, right_character};
  for (int i = 0; i < 2; ++i) {
    FighterState& f = s.fighters[i];
    f.character_id = ids[i];
    f.hp = roster.at(ids[i]).max_hp;
    f.facing = i == 0 ? 1 : -1;
    f.x = kArenaWidth / 2 - f.facing * kSpawnOffset;
    s.projectiles[i].owner = static_cast<Side>(i);
  }
  s.round_frames_left = kRoundFrames;
  return s;
}

GameState advance_frame(const Roster& roster, const GameState& state, ButtonVector left,
                        ButtonVector right, FrameEvents* events) {
  if (state.done) throw EnvError("cannot step a finished round");
  FrameEvents local;
  FrameEvents& ev = events ? *events : local;
  ev = FrameEvents{};

  GameState next = state;
  const ButtonVector inputs[2] = {left, right};
  const CharacterSpec* specs[2] = {&roster.at(next.fighters[0].character_id),
                                   &roster.at(next.fighters[1].character_id)};

  for (int i = 0; i < 2; ++i)
    process_input(*specs[i], next.fighters[i], inputs[i], state.frame_count,
                  !next.projectiles[i].active, ev.info[i]);

  for (int i = 0; i < 2; ++i) apply_physics(*specs[i], next.fighters[i]);
  separate(next.fighters[0], next.fighters[1]);

  for (int i = 0; i < 2; ++i) {
    FighterState& f = next.fighters[i];
    if (auto launch = progress_move(*specs[i], f)) {
      const SpecialMove& m = specs[i]->specials.at(*launch);
      Projectile& p = next.projectiles[i];
      p.owner = static_cast<Side>(i);
      p.x = f.x + f.facing * (kBodyHalfWidth + kProjectileHalfWidth);
      p.y = kProjectileHeight;
      p.vx = f.facing * m.projectile_speed;
      p.damage = m.damage;
      p.active = true;
      ev.info[i].projectile_triggered = true;
    }
  }

  // Melee hits are resolved against one snapshot so both sides act simultaneously.
  std::vector<Hit> hits;
  for (int i = 0; i < 2; ++i) {
    const FighterState& a = next.fighters[i];
    const FighterState& d = next.fighters[1 - i];
    if (!in_active_frames(*specs[i], a)) continue;
    int reach = 0;
    int vertical = kDefaultVerticalReach;
    int damage = 0;
    bool grab = false;
    HitKind kind = HitKind::Normal;
    if (a.move_kind == MoveKind::Special) {
      const SpecialMove& m = specs[i]->specials.at(a.move_index);
      if (m.spawns_projectile) continue;
      reach = m.reach;
      vertical = m.vertical_reach;
      damage = m.damage;
      grab = m.grab;
      kind = HitKind::Special;
    } else {
      const NormalAttack& n = specs[i]->normals.at(a.move_index);
      reach = n.reach;
      damage = n.damage;
    }
    const int dx = d.x - a.x;
    if (std::abs(dx) > reach || std::abs(d.y - a.y) > vertical) continue;
    if (dx * a.facing < -kBodyHalfWidth) continue;  // behind the attacker
    if (d.invincible_frames_left > 0) continue;
    if (grab && (d.y > 0 || d.status == Status::Stunned)) continue;
    const int push = dx != 0 ? sign(dx) : -d.facing;
    hits.push_back({i, 1 - i, damage, kind, !grab, push});
  }
  for (const Hit& h : hits) next.fighters[h.attacker].move_connected = true;

  // Projectiles travel, cancel each other, then strike.
  const int before_dx = next.projectiles[0].x - next.projectiles[1].x;
  for (auto& p : next.projectiles)
    if (p.active) p.x += p.vx;
  if (next.projectiles[0].active && next.projectiles[1].active) {
    const int after_dx = next.projectiles[0].x - next.projectiles[1].x;
    if (std::abs(after_dx) <= 2 * kProjectileHalfWidth || sign(after_dx) != sign(before_dx)) {
      next.projectiles[0] = Projectile{Side::Left};
      next.projectiles[1] = Projectile{Side::Right};
    }
  }
  for (int o = 0; o < 2; ++o) {
    Projectile& p = next.projectiles[o];
    if (!p.active) continue;
    const FighterState& d = next.fighters[1 - o];
    if (std::abs(p.x - d.x) <= kBodyHalfWidth + kProjectileHalfWidth &&
        d.y <= kProjectileMaxHitY && d.invincible_frames_left == 0) {
      hits.push_back({o, 1 - o, p.damage, HitKind::Projectile, true, sign(p.vx)});
      p = Projectile{static_cast<Side>(o)};
    } else if (p.x < 0 || p.x > kArenaWidth) {
      p = Projectile{static_cast<Side>(o)};
    }
  }

  for (const Hit& h : hits) {
    FighterState& d = next.fighters[h.defender];
    const bool blocked = h.blockable && can_block(d);
    int damage = h.damage;
    if (blocked) damage = h.kind == HitKind::Normal ? 0 : h.damage / kChipDivisor;
    const int applied = std::min(damage, d.hp);
    d.hp -= applied;

    StepInfo& dealt = ev.info[h.attacker];
    dealt.damage_dealt += applied;
    if (h.kind == HitKind::Special) dealt.damage_dealt_special += applied;
    if (h.kind == HitKind::Projectile) dealt.damage_dealt_projectile += applied;
    ev.info[h.defender].damage_taken += applied;

    if (blocked) {
      d.status = Status::Blocking;
      d.status_frames_left = std::max(d.status_frames_left, kBlockstunFrames);
      d.vx = h.push_direction * kKnockbackSpeed;
      continue;
    }
    clear_move(d);
    d.vx = h.push_direction * kKnockbackSpeed;
    if (d.y > 0) {
      d.status = Status::Jumping;
      d.status_frames_left = 0;
      d.air_action_used = true;
    } else if (h.kind == HitKind::Normal) {
      d.status = Status::Hitstun;
      d.status_frames_left = kHitstunFrames;
    } else {
      d.status = Status::Stunned;
      d.status_frames_left = kStunFrames;
    }
  }

  for (auto& f : next.fighters) {
    switch (f.status) {
      case Status::Hitstun:
      case Status::Stunned:
      case Status::Blocking:
      case Status::SpecialRecovery:
        if (--f.status_frames_left <= 0) settle(f);
        break;
      default:
        break;
    }
    if (f.invincible_frames_left > 0) --f.invincible_frames_left;
  }

  for (int i = 0; i < 2; ++i) {
    FighterState& f = next.fighters[i];
    const int dx = next.fighters[1 - i].x - f.x;
    if (f.y == 0 && dx != 0 &&
        (f.status == Status::Idle || f.status == Status::Walking || f.status == Status::Crouching))
      f.facing = sign(dx);
  }

  --next.round_frames_left;
  ++next.frame_count;
  const bool ko0 = next.fighters[0].hp == 0;
  const bool ko1 = next.fighters[1].hp == 0;
  if (ko0 || ko1 || next.round_frames_left <= 0) {
    next.done = true;
    if (ko0 && ko1)
      next.winner = Winner::Draw;
    else if (ko1)
      next.winner = Winner::Left;
    else if (ko0)
      next.winner = Winner::Right;
    else if (next.fighters[0].hp > next.fighters[1].hp)
      next.winner = Winner::Left;
    else if (next.fighters[1].hp > next.fighters[0].hp)
      next.winner = Winner::Right;
    else
      next.winner = Winner::Draw;
  }
  return next;
}

Transition step(const Roster& roster, const GameState& state, ButtonVector left,
                ButtonVector right, int frame_skip) {
  if (state.done) throw EnvError("cannot step a finished round");
  Transition t;
  t.state = state;
  for (int k = 0; k < frame_skip && !t.state.done; ++k) {
    FrameEvents ev;
    t.state = advance_frame(roster, t.state, left, right, &ev);
    for (int i = 0; i < 2; ++i) {
      StepInfo& acc = t.info[i];
      const StepInfo& fr = ev.info[i];
      acc.damage_dealt += fr.damage_dealt;
      acc.damage_taken += fr.damage_taken;
      acc.damage_dealt_special += fr.damage_dealt_special;
      acc.damage_dealt_projectile += fr.damage_dealt_projectile;
      acc.special_move_triggered |= fr.special_move_triggered;
      acc.projectile_triggered |= fr.projectile_triggered;
      acc.regular_attack_triggered |= fr.regular_attack_triggered;
      acc.jump_triggered |= fr.jump_triggered;
    }
  }
  const double distance =
      std::abs(t.state.fighters[0].x - t.state.fighters[1].x) / static_cast<double>(kArenaWidth);
  for (int i = 0; i < 2; ++i) {
    StepInfo& info = t.info[i];
    const FighterState& f = t.state.fighters[i];
    info.in_air = f.y > 0;
    info.vulnerable_frames = f.vulnerable() ? 1 : 0;
    info.distance_norm = std::clamp(distance, 0.0, 1.0);
    info.round_over = t.state.done;
    if (t.state.done) {
      const Winner mine = i == 0 ? Winner::Left : Winner::Right;
      info.won = t.state.winner == mine;
    }
  }
  t.done = t.state.done;
  return t;
}

}  // namespace tta::env
