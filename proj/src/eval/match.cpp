#include "tta/eval/match.hpp"

#include <cmath>

#include "tta/env/environment.hpp"
#include "tta/train/schedule.hpp"

namespace tta::eval {

double MatchStats::mean_distance() const {
  if (steps == 0) return 0.0;
  return static_cast<double>(distance_units) /
         (static_cast<double>(steps) * env::config::kArenaWidth);
}

bool MatchStats::won_by(env::Side s) const {
  return (s == env::Side::Left && winner == env::Winner::Left) ||
         (s == env::Side::Right && winner == env::Winner::Right);
}

void StatsAccumulator::add(const std::array<env::StepInfo, 2>& info, int frames) {
  for (int i = 0; i < 2; ++i) {
    auto& s = stats_.sides[i];
    s.special_moves += info[i].special_move_triggered;
    s.regular_attacks += info[i].regular_attack_triggered;
    s.projectiles_fired += info[i].projectile_triggered;
    s.jumps += info[i].jump_triggered;
    s.damage_dealt += info[i].damage_dealt;
    s.steps_in_air += info[i].in_air;
  }
  stats_.distance_units += std::llround(info[0].distance_norm * env::config::kArenaWidth);
  ++stats_.steps;
  stats_.frames += frames;
}

MatchStats StatsAccumulator::finish(env::Winner winner) const {
  MatchStats s = stats_;
  s.winner = winner;
  return s;
}

nlohmann::json stats_to_json(const MatchStats& s) {
  static const char* names[] = {"none", "left", "right", "draw"};
  nlohmann::json sides = nlohmann::json::array();
  for (const auto& x : s.sides)
    sides.push_back({{"special_moves", x.special_moves},
                     {"regular_attacks", x.regular_attacks},
                     {"projectiles_fired", x.projectiles_fired},
                     {"jumps", x.jumps},
                     {"damage_dealt", x.damage_dealt},
                     {"steps_in_air", x.steps_in_air}});
  return {{"winner", names[static_cast<int>(s.winner)]},
          {"sides", sides},
          {"mean_distance_norm", s.mean_distance()},
          {"steps", s.steps},
          {"frames", s.frames}};
}

namespace {

struct Slot {
  std::size_t match = 0;
  std::unique_ptr<env::FightingEnv> env;
  std::array<policy::Rng, 2> rng;
  StatsAccumulator acc;
  std::array<env::Observation, 2> obs;
};

void act_side(Controller& c, env::Side side, std::vector<Slot*>& live,
              std::vector<env::ButtonVector>& out) {
  std::vector<ControlContext> ctx;
  ctx.reserve(live.size());
  for (auto* s : live) {
    ControlContext k;
    k.state = &s->env->state();
    k.side = side;
    k.rng = &s->rng[env::index(side)];
    if (c.needs_observation()) {
      s->obs[env::index(side)] = s->env->observe(side);
      k.observation = &s->obs[env::index(side)];
    }
    ctx.push_back(k);
  }
  out = c.act(ctx);
}

}  // namespace

std::vector<MatchRecord> run_matches(std::shared_ptr<const env::Roster> roster, Controller& left,
                                     Controller& right, const std::vector<MatchSetup>& setups,
                                     int parallel) {
  std::vector<MatchRecord> records(setups.size());
  std::size_t next = 0;
  std::vector<std::unique_ptr<Slot>> slots;
  auto start = [&](std::size_t m) {
    auto s = std::make_unique<Slot>();
    s->match = m;
    s->env = std::make_unique<env::FightingEnv>(roster);
    s->env->reset(setups[m].left_character, setups[m].right_character, env::Side::Left);
    s->rng[0].seed(train::derive_seed(setups[m].seed, 0));
    s->rng[1].seed(train::derive_seed(setups[m].seed, 1));
    return s;
  };
  while (next < setups.size() && static_cast<int>(slots.size()) < std::max(1, parallel))
    slots.push_back(start(next++));

  std::vector<env::ButtonVector> left_in, right_in;
  while (!slots.empty()) {
    std::vector<Slot*> live;
    for (auto& s : slots) live.push_back(s.get());
    act_side(left, env::Side::Left, live, left_in);
    act_side(right, env::Side::Right, live, right_in);
    for (std::size_t i = 0; i < live.size(); ++i) {
      Slot& s = *live[i];
      const int before = s.env->state().round_frames_left;
      const auto t = s.env->step_only(left_in[i], right_in[i]);
      s.acc.add(t.info, before - t.state.round_frames_left);
      if (t.done) {
        auto& rec = records[s.match];
        rec.setup = setups[s.match];
        rec.stats = s.acc.finish(t.state.winner);
        rec.replay = s.env->replay();
      }
    }
    std::vector<std::unique_ptr<Slot>> keep;
    for (auto& s : slots) {
      if (!s->env->state().done)
        keep.push_back(std::move(s));
      else if (next < setups.size())
        keep.push_back(start(next++));
    }
    slots = std::move(keep);
  }
  return records;
}

MatchStats stats_from_replay(const env::Roster& roster, const env::Replay& replay) {
  StatsAccumulator acc;
  int frames_left = env::config::kRoundFrames;
  env::Winner winner = env::Winner::None;
  for (const auto& t : env::simulate(roster, replay)) {
    acc.add(t.info, frames_left - t.state.round_frames_left);
    frames_left = t.state.round_frames_left;
    winner = t.state.winner;
  }
  return acc.finish(winner);
}

}  // namespace tta::eval
