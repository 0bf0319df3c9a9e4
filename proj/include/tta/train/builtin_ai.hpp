#pragma once

#include "tta/env/buttons.hpp"
#include "tta/env/roster.hpp"
#include "tta/env/state.hpp"

namespace tta::train {

inline constexpr int kAiPhaseFrames = 64;
inline constexpr int kAiPhases = 8;
inline constexpr int kAiSpecialPhase = 5;
inline constexpr int kAiEngageDistance = 62;
inline constexpr int kAiSettleSteps = 3;
inline constexpr int kAiBlockFrames = 32;  // blocks in three of every four such windows

/// Scripted opponent: a pure function of the game state. Walks in when far,
/// punishes recovery, blocks most threats, pokes in reach, and every
/// kAiPhases * kAiPhaseFrames frames runs a special-move input script.
/// Returns absolute controller input for `side`.
env::ButtonVector builtin_ai_policy(const env::Roster& roster, const env::GameState& state,
                                    env::Side side);

}  // namespace tta::train
