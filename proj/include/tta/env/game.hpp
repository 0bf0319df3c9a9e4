#pragma once

#include <array>
#include <stdexcept>

#include "tta/env/roster.hpp"
#include "tta/env/state.hpp"

namespace tta::env {

class EnvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fresh round: mirrored spawn positions, full hp, full timer.
/// Throws EnvError on an unknown character id.
GameState reset_state(const Roster& roster, int left_character, int right_character);

struct FrameEvents {
  std::array<StepInfo, 2> info{};  // indexed by side; distance/in_air/vulnerable unset
};

/// Advances one simulation frame. Inputs are absolute controller states for
/// the left and right fighters. Throws EnvError if the round is already over.
GameState advance_frame(const Roster& roster, const GameState& state, ButtonVector left,
                        ButtonVector right, FrameEvents* events = nullptr);

struct Transition {
  GameState state;
  std::array<StepInfo, 2> info{};  // indexed by side
  bool done = false;
};

/// One decision step: the inputs are held for `frame_skip` frames (fewer if
/// the round ends first) and the per-frame events are accumulated.
Transition step(const Roster& roster, const GameState& state, ButtonVector left,
                ButtonVector right, int frame_skip = config::kFrameSkip);

}  // namespace tta::env
