#pragma once

#include <array>
#include <deque>
#include <vector>

#include "tta/env/render.hpp"
#include "tta/env/roster.hpp"
#include "tta/env/state.hpp"

namespace tta::env {

/// Everything one side's policy sees, expressed in that side's own frame:
/// the right-side view is the mirrored game, so every observer sees itself
/// as the "self" fighter standing on the left-hand channel.
struct Observation {
  Image image;
  std::vector<float> scalars;
  std::vector<float> history;  // history_length x 12, oldest first, zero-padded at the front
  int history_valid = 0;       // number of trailing rows holding real actions

  int history_length() const { return static_cast<int>(history.size()) / kNumButtons; }
};

/// self status one-hot (9), opponent status one-hot (9), self and opponent
/// character one-hot (roster size each), hp fractions (2), x/y normalised for
/// both (4), facing (2), round-time fraction (1).
int scalar_dim(int roster_size);

std::vector<float> encode_scalars(const Roster& roster, const GameState& state, Side self);

/// Converts between absolute controller input and the side's own frame
/// (LEFT/RIGHT swapped on the right side). The map is its own inverse.
constexpr ButtonVector to_own_frame(ButtonVector absolute, Side side) {
  return side == Side::Left ? absolute : absolute.mirrored();
}

/// Rolling window of a side's own past actions.
class ActionHistory {
 public:
  explicit ActionHistory(int length = config::kHistoryLength) : length_(length) {}
  void clear() { rows_.clear(); }
  void push(ButtonVector own_frame_action);
  int length() const { return length_; }
  int valid() const { return static_cast<int>(rows_.size()); }
  void write(std::vector<float>& out) const;

 private:
  int length_;
  std::deque<ButtonVector> rows_;
};

Observation make_observation(const Roster& roster, const GameState& state, Side self,
                             const ActionHistory& history);

}  // namespace tta::env
