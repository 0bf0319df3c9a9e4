#include "tta/train/builtin_ai.hpp"

#include <cstdlib>
#include <optional>
#include <vector>

namespace tta::train {

namespace {

using env::Button;
using env::ButtonVector;

bool threatened(const env::Roster& roster, const env::GameState& s, env::Side side) {
  const auto& self = s.fighter(side);
  const auto& opp = s.fighter(env::opposite(side));
  const int dist = std::abs(opp.x - self.x);
  if (opp.status == env::Status::Attacking && dist <= roster.max_reach() + 10) return true;
  const auto& p = s.projectiles[env::index(env::opposite(side))];
  if (p.active) {
    const int gap = self.x - p.x;
    if ((gap > 0) == (p.vx > 0) && std::abs(gap) <= 120) return true;
  }
  return false;
}

/// Input script for a special: a down-back charge if needed, the motion,
/// and the trigger button on the last step.
std::vector<ButtonVector> special_script(const env::SpecialMove& m, int facing) {
  std::vector<int> dirs;
  if (m.charge_frames > 0) {
    const int hold = (m.charge_frames + env::config::kFrameSkip - 1) / env::config::kFrameSkip + 1;
    dirs.assign(static_cast<std::size_t>(hold), 1);  // crouching charge keeps the distance
  }
  dirs.insert(dirs.end(), m.motion.begin(), m.motion.end());
  std::vector<ButtonVector> out;
  for (int d : dirs) out.push_back(env::buttons_for_direction(d, facing));
  if (!out.empty()) out.back().set(m.trigger == env::TriggerClass::Punch ? Button::HP : Button::HK);
  return out;
}

/// Frames the opponent is still unable to act, or 0.
int punish_window(const env::Roster& roster, const env::FighterState& opp) {
  if (opp.vulnerable()) return opp.status_frames_left;
  if (opp.status == env::Status::Attacking && opp.move_kind == env::MoveKind::Normal) {
    const auto& n = roster.at(opp.character_id).normals.at(static_cast<std::size_t>(opp.move_index));
    if (opp.move_frame >= n.startup + n.active) return n.startup + n.active + n.recovery - opp.move_frame;
  }
  return 0;
}

/// Strongest (or fastest) normal that reaches `dist` and starts within `window`.
const env::NormalAttack* pick_normal(const env::CharacterSpec& spec, int dist, int window,
                                     bool strongest) {
  const env::NormalAttack* best = nullptr;
  for (const auto& n : spec.normals) {
    if (n.reach < dist || n.startup > window) continue;
    if (!best) {
      best = &n;
    } else if (strongest ? n.damage > best->damage
                         : (n.startup < best->startup ||
                            (n.startup == best->startup && n.damage > best->damage))) {
      best = &n;
    }
  }
  return best;
}

/// Presses `b` only if no attack was held last frame, so it is a fresh edge.
ButtonVector press_fresh(const env::FighterState& self, Button b) {
  ButtonVector out;
  if (self.held_attacks == 0) out.set(b);
  return out;
}

bool special_in_range(const env::SpecialMove& m, int dist) {
  if (m.spawns_projectile) return dist >= 90;
  if (m.grab) return dist <= m.reach + kAiEngageDistance;
  const int travel = m.forward_speed * m.active;
  return dist <= m.reach + travel + 10;
}

}  // namespace

ButtonVector builtin_ai_policy(const env::Roster& roster, const env::GameState& s, env::Side side) {
  const auto& self = s.fighter(side);
  const auto& opp = s.fighter(env::opposite(side));
  const auto& spec = roster.at(self.character_id);
  const int dist = std::abs(opp.x - self.x);
  const std::int64_t t = s.frame_count;
  const int phase = static_cast<int>((t / kAiPhaseFrames) % kAiPhases);
  const int cycle = static_cast<int>(t / (kAiPhaseFrames * kAiPhases));
  const int step_in_phase = static_cast<int>((t % kAiPhaseFrames) / env::config::kFrameSkip);

  // Special phase: the first special in range, rotating with the cycle, runs
  // its script over the last steps of the phase, after a short idle so no
  // normal is still active. Grabs walk in first.
  if (phase == kAiSpecialPhase) {
    const int n = static_cast<int>(spec.specials.size());
    for (int i = 0; i < n; ++i) {
      const auto& m = spec.specials[static_cast<std::size_t>((cycle + i) % n)];
      if (!special_in_range(m, dist)) continue;
      const auto script = special_script(m, self.facing);
      const int start = kAiPhaseFrames / env::config::kFrameSkip - static_cast<int>(script.size());
      if (step_in_phase >= start) return script[static_cast<std::size_t>(step_in_phase - start)];
      if (threatened(roster, s, side)) break;
      if (m.grab && dist > m.reach) return env::buttons_for_direction(6, self.facing);
      if (step_in_phase >= start - kAiSettleSteps) return {};
      break;
    }
  }

  // Punish an opponent stuck in recovery or hitstun with the strongest normal
  // that lands in time.
  if (const int window = punish_window(roster, opp); window > 0) {
    if (const auto* n = pick_normal(spec, dist, window, true)) return press_fresh(self, n->button);
  }

  const bool threat = threatened(roster, s, side);
  if (threat && (t / kAiBlockFrames) % 4 != 3) return env::buttons_for_direction(4, self.facing);

  if (dist > kAiEngageDistance) return threat ? ButtonVector{} : env::buttons_for_direction(6, self.facing);

  // Neutral in reach: the fastest poke that connects.
  if (const auto* n = pick_normal(spec, dist, 1 << 20, false)) return press_fresh(self, n->button);
  return threat ? ButtonVector{} : env::buttons_for_direction(6, self.facing);
}

}  // namespace tta::train
