#pragma once

#include <array>
#include <memory>

#include "tta/env/game.hpp"
#include "tta/env/observation.hpp"
#include "tta/env/replay.hpp"

namespace tta::env {

struct EnvOptions {
  int history_length = config::kHistoryLength;
  int frame_skip = config::kFrameSkip;
  bool record_replay = true;
};

/// Stateful episode wrapper around the pure transition: keeps both sides'
/// action histories and the replay log. One instance per execution context.
class FightingEnv {
 public:
  explicit FightingEnv(std::shared_ptr<const Roster> roster, EnvOptions options = {});

  struct ResetResult {
    GameState state;
    std::array<Observation, 2> observations;
  };
  struct StepResult {
    GameState state;
    std::array<Observation, 2> observations;
    std::array<StepInfo, 2> info;
    bool done = false;
  };

  /// Left/right characters; the agent controls `agent_side`.
  ResetResult reset(int left_character, int right_character, Side agent_side);

  /// Absolute controller inputs for the agent and its opponent.
  StepResult step(ButtonVector agent, ButtonVector opponent);

  /// Same as step() but skips rendering, for callers that observe lazily.
  Transition step_only(ButtonVector agent, ButtonVector opponent);

  Observation observe(Side side) const;

  const GameState& state() const { return state_; }
  Side agent_side() const { return agent_side_; }
  const Replay& replay() const { return replay_; }
  const Roster& roster() const { return *roster_; }
  std::shared_ptr<const Roster> roster_ptr() const { return roster_; }
  const EnvOptions& options() const { return options_; }

 private:
  std::shared_ptr<const Roster> roster_;
  EnvOptions options_;
  GameState state_;
  Side agent_side_ = Side::Left;
  std::array<ActionHistory, 2> history_;
  Replay replay_;
  bool started_ = false;
};

}  // namespace tta::env
