#include <gtest/gtest.h>

#include <random>

#include "../common/oracles.hpp"
#include "../common/random_inputs.hpp"
#include "tta/env/environment.hpp"
#include "tta/env/game.hpp"
#include "tta/env/render.hpp"
#include "tta/env/replay.hpp"

using namespace tta::env;

namespace {

const Roster& roster() { return default_roster(); }

ButtonVector press(std::initializer_list<Button> bs) {
  ButtonVector b;
  for (auto x : bs) b.set(x);
  return b;
}

}  // namespace

TEST(Reset, DeterministicFullHealthAndTimer) {
  const auto a = reset_state(roster(), 0, 0);
  const auto b = reset_state(roster(), 0, 0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(state_hash(a), state_hash(b));
  const auto s = reset_state(roster(), 0, 1);
  EXPECT_EQ(s.fighters[0].hp, config::kMaxHp);
  EXPECT_EQ(s.fighters[1].hp, config::kMaxHp);
  EXPECT_EQ(s.round_frames_left, config::kRoundFrames);
  EXPECT_EQ(s.fighters[0].x + s.fighters[1].x, config::kArenaWidth);
  EXPECT_FALSE(s.done);
}

TEST(Reset, SwappedCharactersAreTheMirrorImage) {
  FightingEnv env(std::make_shared<Roster>(roster()));
  const auto a = env.reset(0, 1, Side::Left).state;
  const auto b = env.reset(1, 0, Side::Right).state;
  EXPECT_EQ(tta::testing::mirror_oracle(a), b);
}

TEST(Reset, UnknownCharacterThrows) {
  EXPECT_THROW(reset_state(roster(), 0, 4), EnvError);
  EXPECT_THROW(reset_state(roster(), -1, 0), EnvError);
}

TEST(Mirror, MatchesFieldwiseDefinitionAndIsInvolution) {
  GameState s = reset_state(roster(), 2, 3);
  tta::testing::InputScript in(3);
  for (int i = 0; i < 300 && !s.done; ++i) {
    s = step(roster(), s, in.next(), in.next()).state;
    EXPECT_EQ(mirror(s), tta::testing::mirror_oracle(s));
    EXPECT_EQ(mirror(mirror(s)), tta::testing::mirror_oracle(tta::testing::mirror_oracle(s)));
  }
}

TEST(Step, NoOpInputsDealNoDamage) {
  GameState s = reset_state(roster(), 0, 1);
  const auto start = s;
  for (int k = 0; k < 50; ++k) {
    const auto t = step(roster(), s, {}, {});
    EXPECT_EQ(t.info[0].damage_dealt + t.info[1].damage_dealt, 0);
    s = t.state;
  }
  EXPECT_EQ(s.fighters[0].hp, start.fighters[0].hp);
  EXPECT_EQ(s.fighters[1].hp, start.fighters[1].hp);
  EXPECT_EQ(s.fighters[0].x, start.fighters[0].x);
  EXPECT_EQ(s.fighters[1].x, start.fighters[1].x);
  EXPECT_EQ(s.round_frames_left, start.round_frames_left - 50 * config::kFrameSkip);
}

TEST(Step, SameInputsSameSuccessor) {
  GameState s = reset_state(roster(), 1, 2);
  const auto a = press({Button::Right, Button::HP});
  const auto b = press({Button::Down, Button::LK});
  EXPECT_EQ(state_hash(step(roster(), s, a, b).state), state_hash(step(roster(), s, a, b).state));
}

TEST(Step, RegularHitBookkeeping) {
  GameState s = reset_state(roster(), 0, 0);
  s.fighters[0].x = 180;
  s.fighters[1].x = 235;  // inside MP reach
  const int before = s.fighters[1].hp;
  StepInfo left_total, right_total;
  bool first = true;
  for (int k = 0; k < 6; ++k) {
    const auto t = step(roster(), s, first ? press({Button::MP}) : ButtonVector{}, {});
    first = false;
    // Per-step accounting: what one side reports as dealt, the other took,
    // and it equals the hp that actually left the defender.
    EXPECT_EQ(t.info[0].damage_dealt, t.info[1].damage_taken);
    EXPECT_EQ(t.info[0].damage_dealt, s.fighters[1].hp - t.state.fighters[1].hp);
    left_total.damage_dealt += t.info[0].damage_dealt;
    left_total.damage_dealt_special += t.info[0].damage_dealt_special;
    right_total.damage_taken += t.info[1].damage_taken;
    s = t.state;
  }
  EXPECT_EQ(left_total.damage_dealt, 10);
  EXPECT_EQ(left_total.damage_dealt_special, 0);
  EXPECT_EQ(right_total.damage_taken, 10);
  EXPECT_EQ(s.fighters[1].hp, before - 10);
}

TEST(Step, BlockedNormalDoesNothingAndSpecialChips) {
  GameState s = reset_state(roster(), 0, 0);
  s.fighters[0].x = 180;
  s.fighters[1].x = 235;
  const auto back = press({Button::Right});  // right fighter faces left
  int dealt = 0;
  for (int k = 0; k < 6; ++k) {
    const auto t = step(roster(), s, k == 0 ? press({Button::MP}) : ButtonVector{}, back);
    dealt += t.info[0].damage_dealt;
    s = t.state;
  }
  EXPECT_EQ(dealt, 0);
}

TEST(Step, SteppingFinishedRoundThrows) {
  GameState s = reset_state(roster(), 0, 0);
  s.round_frames_left = 1;
  const auto t = step(roster(), s, {}, {});
  EXPECT_TRUE(t.done);
  EXPECT_EQ(t.state.winner, Winner::Draw);
  EXPECT_TRUE(t.info[0].round_over);
  EXPECT_EQ(t.info[0].won, std::optional<bool>(false));
  EXPECT_THROW(step(roster(), t.state, {}, {}), EnvError);
}

TEST(Step, KnockoutDecidesWinner) {
  GameState s = reset_state(roster(), 0, 0);
  s.fighters[0].x = 180;
  s.fighters[1].x = 235;
  s.fighters[1].hp = 5;
  Transition t;
  for (int k = 0; k < 6; ++k) {
    t = step(roster(), s, k == 0 ? press({Button::MP}) : ButtonVector{}, {});
    s = t.state;
    if (t.done) break;
  }
  ASSERT_TRUE(t.done);
  EXPECT_EQ(s.winner, Winner::Left);
  EXPECT_EQ(s.fighters[1].hp, 0);
  EXPECT_EQ(t.info[0].won, std::optional<bool>(true));
  EXPECT_EQ(t.info[1].won, std::optional<bool>(false));
}

TEST(Step, HadoukenSpawnsProjectileAndCountsBoth) {
  GameState s = reset_state(roster(), 0, 0);
  const std::vector<ButtonVector> motion = {press({Button::Down}), press({Button::Down, Button::Right}),
                                            press({Button::Right, Button::LP})};
  bool special = false, projectile = false;
  int projectile_damage = 0, special_damage = 0;
  for (std::size_t k = 0; k < 40; ++k) {
    const auto t = step(roster(), s, k < motion.size() ? motion[k] : ButtonVector{}, {});
    special |= t.info[0].special_move_triggered;
    projectile |= t.info[0].projectile_triggered;
    projectile_damage += t.info[0].damage_dealt_projectile;
    special_damage += t.info[0].damage_dealt_special;
    s = t.state;
  }
  EXPECT_TRUE(special);
  EXPECT_TRUE(projectile);
  EXPECT_EQ(projectile_damage, roster().at(0).specials[0].damage);
  EXPECT_EQ(special_damage, 0);
}

namespace {

struct RandomRun {
  std::vector<std::uint64_t> hashes;
};

RandomRun run_script(std::uint64_t seed, int steps, int lc, int rc) {
  tta::testing::InputScript a(seed), b(seed ^ 0x9E3779B97F4A7C15ull);
  GameState s = reset_state(roster(), lc, rc);
  RandomRun r;
  for (int i = 0; i < steps; ++i) {
    if (s.done) s = reset_state(roster(), lc, rc);
    s = step(roster(), s, a.next(), b.next()).state;
    r.hashes.push_back(state_hash(s));
  }
  return r;
}

}  // namespace

TEST(Properties, ReplayedScriptsGiveIdenticalHashes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = run_script(seed, 1000, seed % 4, (seed / 4) % 4);
    const auto y = run_script(seed, 1000, seed % 4, (seed / 4) % 4);
    EXPECT_EQ(x.hashes, y.hashes) << "seed " << seed;
  }
}

TEST(Properties, SideSymmetryOnRandomSteps) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 3000; ++seed) {
    tta::testing::InputScript a(seed), b(seed + 1000);
    GameState s = reset_state(roster(), rng() % 4, rng() % 4);
    while (!s.done && checked < 3000) {
      const auto ia = a.next(), ib = b.next();
      const auto t = step(roster(), s, ia, ib);
      const auto tm = step(roster(), tta::testing::mirror_oracle(s), ib.mirrored(), ia.mirrored());
      ASSERT_EQ(tm.state, tta::testing::mirror_oracle(t.state)) << "step " << checked;
      EXPECT_EQ(tm.info[0], t.info[1]);
      EXPECT_EQ(tm.info[1], t.info[0]);
      s = t.state;
      ++checked;
    }
  }
}

TEST(Properties, HpMonotoneAccountingAndFlags) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    tta::testing::InputScript a(seed * 7 + 1), b(seed * 7 + 2);
    GameState s = reset_state(roster(), seed % 4, (seed + 1) % 4);
    int steps = 0;
    int specials = 0;
    while (!s.done) {
      // Frame level: a special flag must coincide with the exhaustive matcher.
      for (int f = 0; f < config::kFrameSkip && !s.done; ++f) {
        const auto ia = a.next(), ib = b.next();
        FrameEvents ev;
        const auto n = advance_frame(roster(), s, ia, ib, &ev);
        for (int i = 0; i < 2; ++i) {
          EXPECT_LE(n.fighters[i].hp, s.fighters[i].hp);
          EXPECT_GE(n.fighters[i].hp, 0);
          EXPECT_EQ(ev.info[i].damage_taken, s.fighters[i].hp - n.fighters[i].hp);
          EXPECT_EQ(ev.info[i].damage_dealt, ev.info[1 - i].damage_taken);
          EXPECT_LE(ev.info[i].damage_dealt_special + ev.info[i].damage_dealt_projectile,
                    ev.info[i].damage_dealt);
          EXPECT_GE(n.fighters[i].x, 0);
          EXPECT_LE(n.fighters[i].x, config::kArenaWidth);
          EXPECT_GE(n.fighters[i].y, 0);
          if (n.fighters[i].y > 0) {
            EXPECT_TRUE(n.fighters[i].status == Status::Jumping ||
                        n.fighters[i].status == Status::Attacking);
          }
          if (ev.info[i].special_move_triggered) {
            ++specials;
            const auto& spec = roster().at(n.fighters[i].character_id);
            EXPECT_TRUE(tta::testing::special_oracle(n.fighters[i].commands.entries(), spec,
                                                     s.frame_count, s.fighters[i].charge_counter,
                                                     config::kMotionWindow)
                            .has_value());
          }
        }
        EXPECT_LE(n.active_projectiles(), 2);
        EXPECT_EQ(n.done, n.fighters[0].hp == 0 || n.fighters[1].hp == 0 || n.round_frames_left == 0);
        if (n.winner == Winner::Draw) {
          EXPECT_EQ(n.round_frames_left, 0);
          EXPECT_EQ(n.fighters[0].hp, n.fighters[1].hp);
        }
        s = n;
      }
      ++steps;
    }
    EXPECT_LE(steps * config::kFrameSkip,
              config::kRoundFrames + roster().max_recovery_frames() + config::kFrameSkip);
    EXPECT_GT(specials, 0) << "seed " << seed;
  }
}

TEST(Properties, StepInfoRanges) {
  tta::testing::InputScript a(77), b(78);
  GameState s = reset_state(roster(), 3, 0);
  while (!s.done) {
    const auto t = step(roster(), s, a.next(), b.next());
    for (const auto& i : t.info) {
      EXPECT_GE(i.distance_norm, 0.0);
      EXPECT_LE(i.distance_norm, 1.0);
      EXPECT_GE(i.damage_dealt, 0);
      EXPECT_GE(i.damage_taken, 0);
      EXPECT_TRUE(i.vulnerable_frames == 0 || i.vulnerable_frames == 1);
      EXPECT_EQ(i.round_over, t.done);
      EXPECT_EQ(i.won.has_value(), t.done);
    }
    EXPECT_DOUBLE_EQ(t.info[0].distance_norm, t.info[1].distance_norm);
    s = t.state;
  }
}

TEST(Render, DeterministicAndProjectileChannelEmptyWithoutProjectiles) {
  const auto s = reset_state(roster(), 0, 1);
  const auto img = render(roster(), s);
  EXPECT_EQ(img, render(roster(), s));
  for (int r = 0; r < Image::kSize; ++r)
    for (int c = 0; c < Image::kSize; ++c) EXPECT_EQ(img.at(2, r, c), 0);
  int lit = 0;
  for (auto v : img.data) lit += v > 0;
  EXPECT_GT(lit, 0);
}

TEST(Render, WallMirrorImage) {
  GameState s = reset_state(roster(), 0, 3);
  s.fighters[0].x = 0;
  s.fighters[1].x = 60;
  s.fighters[1].hp = 77;
  s.projectiles[0] = Projectile{Side::Left, 120, 40, 4, 16, true};
  const auto m = tta::testing::mirror_oracle(s);
  EXPECT_EQ(m.fighters[0].x, 340);
  EXPECT_EQ(m.fighters[1].x, 400);
  EXPECT_EQ(render(roster(), m), render(roster(), s).mirrored());
}

TEST(Render, MirrorOnRandomStates) {
  tta::testing::InputScript a(9), b(10);
  GameState s = reset_state(roster(), 1, 0);
  for (int i = 0; i < 400 && !s.done; ++i) {
    s = step(roster(), s, a.next(), b.next()).state;
    ASSERT_EQ(render(roster(), tta::testing::mirror_oracle(s)), render(roster(), s).mirrored());
  }
}

TEST(Observation, EgoViewsAreMirrorsAndHistoryPadsAtFront) {
  FightingEnv env(std::make_shared<Roster>(roster()));
  auto r = env.reset(0, 1, Side::Left);
  EXPECT_EQ(r.observations[0].history_valid, 0);
  for (float v : r.observations[0].history) EXPECT_EQ(v, 0.0f);
  const auto a = press({Button::Right, Button::LP});
  const auto st = env.step(a, {});
  const auto& own = st.observations[0];
  EXPECT_EQ(own.history_valid, 1);
  const int last = (own.history_length() - 1) * kNumButtons;
  EXPECT_EQ(own.history[last + 3], 1.0f);
  EXPECT_EQ(own.history[last + 4], 1.0f);
  EXPECT_EQ(own.image.data.size(), static_cast<std::size_t>(Image::kPixels));
  EXPECT_EQ(st.observations[1].image, render(roster(), mirror(st.state)));
  EXPECT_EQ(own.scalars.size(), static_cast<std::size_t>(scalar_dim(roster().size())));
}

TEST(Observation, RightSideSeesMirroredGame) {
  FightingEnv left(std::make_shared<Roster>(roster()));
  FightingEnv right(std::make_shared<Roster>(roster()));
  left.reset(2, 3, Side::Left);
  right.reset(3, 2, Side::Right);
  tta::testing::InputScript a(1), b(2);
  for (int i = 0; i < 200; ++i) {
    const auto x = a.next(), y = b.next();
    const auto sl = left.step(x, y);
    const auto sr = right.step(x.mirrored(), y.mirrored());
    ASSERT_EQ(sl.observations[0].image, sr.observations[1].image);
    ASSERT_EQ(sl.observations[0].scalars, sr.observations[1].scalars);
    ASSERT_EQ(sl.observations[0].history, sr.observations[1].history);
    if (sl.done) break;
  }
}

TEST(Replay, ReSimulatesBitExactly) {
  FightingEnv env(std::make_shared<Roster>(roster()));
  env.reset(1, 3, Side::Right);
  tta::testing::InputScript a(21), b(22);
  std::vector<std::uint64_t> hashes;
  for (int i = 0; i < 300; ++i) {
    const auto r = env.step(a.next(), b.next());
    hashes.push_back(state_hash(r.state));
    if (r.done) break;
  }
  const auto round_trip = replay_from_json(replay_to_json(env.replay()));
  EXPECT_EQ(round_trip, env.replay());
  const auto sim = simulate(roster(), round_trip);
  ASSERT_EQ(sim.size(), hashes.size());
  for (std::size_t i = 0; i < sim.size(); ++i) EXPECT_EQ(state_hash(sim[i].state), hashes[i]);
}

TEST(Roster, JsonRoundTripAndValidation) {
  const auto doc = roster_to_json(roster());
  EXPECT_EQ(doc.at("spec_version"), kRosterSpecVersion);
  const auto back = roster_from_json(doc);
  EXPECT_EQ(roster_to_json(back), doc);
  EXPECT_EQ(roster().find("Honda"), 2);
  EXPECT_EQ(roster().find("Ryu"), 0);
  EXPECT_EQ(roster().find("Guile"), std::nullopt);
  auto bad = doc;
  bad["characters"][0]["specials"][0]["recovery_frames"] = 0;
  EXPECT_THROW(roster_from_json(bad), RosterError);
  bad = doc;
  bad.erase("spec_version");
  EXPECT_THROW(roster_from_json(bad), RosterError);
}
