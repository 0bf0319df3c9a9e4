#include "tta/env/observation.hpp"

#include <algorithm>

namespace tta::env {

int scalar_dim(int roster_size) { return 2 * kNumStatuses + 2 * roster_size + 2 + 4 + 2 + 1; }

std::vector<float> encode_scalars(const Roster& roster, const GameState& state, Side self) {
  const GameState own = self == Side::Left ? state : mirror(state);
  const FighterState& me = own.fighters[0];
  const FighterState& op = own.fighters[1];
  const int n = roster.size();

  std::vector<float> v(static_cast<std::size_t>(scalar_dim(n)), 0.0f);
  std::size_t k = 0;
  v[k + static_cast<int>(me.status)] = 1.0f;
  k += kNumStatuses;
  v[k + static_cast<int>(op.status)] = 1.0f;
  k += kNumStatuses;
  v[k + me.character_id] = 1.0f;
  k += n;
  v[k + op.character_id] = 1.0f;
  k += n;
  v[k++] = static_cast<float>(me.hp) / roster.at(me.character_id).max_hp;
  v[k++] = static_cast<float>(op.hp) / roster.at(op.character_id).max_hp;
  v[k++] = static_cast<float>(me.x) / config::kArenaWidth;
  v[k++] = static_cast<float>(me.y) / config::kArenaHeight;
  v[k++] = static_cast<float>(op.x) / config::kArenaWidth;
  v[k++] = static_cast<float>(op.y) / config::kArenaHeight;
  v[k++] = static_cast<float>(me.facing);
  v[k++] = static_cast<float>(op.facing);
  v[k++] = static_cast<float>(own.round_frames_left) / config::kRoundFrames;
  return v;
}

void ActionHistory::push(ButtonVector own_frame_action) {
  rows_.push_back(own_frame_action);
  while (static_cast<int>(rows_.size()) > length_) rows_.pop_front();
}

void ActionHistory::write(std::vector<float>& out) const {
  out.assign(static_cast<std::size_t>(length_) * kNumButtons, 0.0f);
  const int pad = length_ - valid();
  for (int r = 0; r < valid(); ++r)
    for (int b = 0; b < kNumButtons; ++b)
      out[static_cast<std::size_t>(pad + r) * kNumButtons + b] = rows_[r].test(b) ? 1.0f : 0.0f;
}

Observation make_observation(const Roster& roster, const GameState& state, Side self,
                             const ActionHistory& history) {
  Observation obs;
  obs.image = render(roster, self == Side::Left ? state : mirror(state));
  obs.scalars = encode_scalars(roster, state, self);
  history.write(obs.history);
  obs.history_valid = history.valid();
  return obs;
}

}  // namespace tta::env
