#include "tta/env/environment.hpp"

namespace tta::env {

FightingEnv::FightingEnv(std::shared_ptr<const Roster> roster, EnvOptions options)
    : roster_(std::move(roster)),
      options_(options),
      history_{ActionHistory(options.history_length), ActionHistory(options.history_length)} {
  if (!roster_) throw EnvError("environment needs a roster");
  if (options_.frame_skip < 1) throw EnvError("frame_skip must be >= 1");
}

FightingEnv::ResetResult FightingEnv::reset(int left_character, int right_character,
                                            Side agent_side) {
  state_ = reset_state(*roster_, left_character, right_character);
  agent_side_ = agent_side;
  for (auto& h : history_) h.clear();
  replay_ = Replay{left_character, right_character, agent_side, options_.frame_skip, {}};
  started_ = true;
  return {state_, {observe(Side::Left), observe(Side::Right)}};
}

Transition FightingEnv::step_only(ButtonVector agent, ButtonVector opponent) {
  if (!started_) throw EnvError("step before reset");
  const ButtonVector left = agent_side_ == Side::Left ? agent : opponent;
  const ButtonVector right = agent_side_ == Side::Left ? opponent : agent;
  Transition t = tta::env::step(*roster_, state_, left, right, options_.frame_skip);
  history_[0].push(to_own_frame(left, Side::Left));
  history_[1].push(to_own_frame(right, Side::Right));
  if (options_.record_replay) replay_.inputs.emplace_back(left.mask(), right.mask());
  state_ = t.state;
  return t;
}

FightingEnv::StepResult FightingEnv::step(ButtonVector agent, ButtonVector opponent) {
  Transition t = step_only(agent, opponent);
  return {t.state, {observe(Side::Left), observe(Side::Right)}, t.info, t.done};
}

Observation FightingEnv::observe(Side side) const {
  return make_observation(*roster_, state_, side, history_[index(side)]);
}

}  // namespace tta::env
