#include "tta/env/state.hpp"

#include "tta/env/config.hpp"

namespace tta::env {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Idle: return "idle";
    case Status::Walking: return "walking";
    case Status::Crouching: return "crouching";
    case Status::Jumping: return "jumping";
    case Status::Attacking: return "attacking";
    case Status::Blocking: return "blocking";
    case Status::Hitstun: return "hitstun";
    case Status::Stunned: return "stunned";
    case Status::SpecialRecovery: return "special_recovery";
  }
  return "unknown";
}

int GameState::active_projectiles() const {
  int n = 0;
  for (const auto& p : projectiles) n += p.active ? 1 : 0;
  return n;
}

namespace {

class Fnv1a {
 public:
  template <typename T>
  void add(T value) {
    auto v = static_cast<std::uint64_t>(static_cast<std::int64_t>(value));
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xFFu;
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t state_hash(const GameState& s) {
  Fnv1a h;
  for (const auto& f : s.fighters) {
    h.add(f.character_id);
    h.add(f.hp);
    h.add(f.x);
    h.add(f.y);
    h.add(f.vx);
    h.add(f.vy);
    h.add(f.facing);
    h.add(static_cast<int>(f.status));
    h.add(f.status_frames_left);
    h.add(f.invincible_frames_left);
    h.add(f.charge_counter);
    h.add(static_cast<int>(f.move_kind));
    h.add(f.move_index);
    h.add(f.move_frame);
    h.add(f.move_connected);
    h.add(f.air_action_used);
    h.add(f.last_direction);
    h.add(f.held_attacks);
    h.add(f.commands.size());
    for (const auto& e : f.commands.entries()) {
      h.add(e.frame);
      h.add(e.direction);
      h.add(e.pressed);
    }
  }
  for (const auto& p : s.projectiles) {
    h.add(static_cast<int>(p.owner));
    h.add(p.x);
    h.add(p.y);
    h.add(p.vx);
    h.add(p.damage);
    h.add(p.active);
  }
  h.add(s.round_frames_left);
  h.add(s.frame_count);
  h.add(s.done);
  h.add(static_cast<int>(s.winner));
  return h.value();
}

GameState mirror(const GameState& s) {
  GameState m = s;
  for (int i = 0; i < 2; ++i) {
    FighterState f = s.fighters[1 - i];
    f.x = config::kArenaWidth - f.x;
    f.vx = -f.vx;
    f.facing = -f.facing;
    m.fighters[i] = f;

    Projectile p = s.projectiles[1 - i];
    if (p.active) {
      p.x = config::kArenaWidth - p.x;
      p.vx = -p.vx;
    } else {
      p = Projectile{};
    }
    p.owner = static_cast<Side>(i);
    m.projectiles[i] = p;
  }
  if (s.winner == Winner::Left) m.winner = Winner::Right;
  if (s.winner == Winner::Right) m.winner = Winner::Left;
  return m;
}

}  // namespace tta::env
