#include <gtest/gtest.h>

#include "tta/env/game.hpp"
#include "tta/eval/match.hpp"

using namespace tta;
using namespace tta::eval;

namespace {

std::shared_ptr<const env::Roster> roster() {
  static auto r = std::make_shared<const env::Roster>(env::default_roster());
  return r;
}

std::vector<MatchSetup> setups(int n, std::uint64_t seed = 0) {
  std::vector<MatchSetup> out;
  for (int i = 0; i < n; ++i)
    out.push_back({i % roster()->size(), (i + 1) % roster()->size(), seed + static_cast<std::uint64_t>(i)});
  return out;
}

}  // namespace

TEST(Match, IdleFightersStayAtSpawnDistance) {
  NoopController a, b;
  const auto recs = run_matches(roster(), a, b, setups(2));
  for (const auto& r : recs) {
    EXPECT_DOUBLE_EQ(r.stats.mean_distance(), 0.35);
    EXPECT_EQ(r.stats.sides[0].special_moves, 0);
    EXPECT_EQ(r.stats.sides[1].special_moves, 0);
    EXPECT_EQ(r.stats.winner, env::Winner::Draw);
    EXPECT_EQ(r.stats.frames, env::config::kRoundFrames);
    EXPECT_EQ(r.stats.steps, env::config::kRoundFrames / env::config::kFrameSkip);
  }
}

TEST(Match, MacroTriggersExactlyOneSpecial) {
  MacroController macro(roster());
  NoopController idle;
  std::vector<MatchSetup> s;
  for (int c = 0; c < roster()->size(); ++c) s.push_back({c, 0, 1});
  for (const auto& r : run_matches(roster(), macro, idle, s)) {
    EXPECT_EQ(r.stats.sides[0].special_moves, 1) << roster()->at(r.setup.left_character).name;
    EXPECT_EQ(r.stats.sides[1].special_moves, 0);
  }
}

TEST(Match, ReplayReproducesStatistics) {
  RandomController a;
  BuiltinAiController b(roster());
  for (const auto& r : run_matches(roster(), a, b, setups(4, 7), 3))
    EXPECT_EQ(stats_from_replay(*roster(), r.replay), r.stats);
}

TEST(Match, SeededAndIndependentOfBatching) {
  RandomController a, b;
  const auto x = run_matches(roster(), a, b, setups(5, 3), 5);
  const auto y = run_matches(roster(), a, b, setups(5, 3), 2);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].stats, y[i].stats);
    EXPECT_EQ(x[i].replay, y[i].replay);
  }
}

TEST(Match, AccountingAgreesWithState) {
  RandomController a;
  BuiltinAiController b(roster());
  for (const auto& r : run_matches(roster(), a, b, setups(4, 21))) {
    const auto end = env::simulate(*roster(), r.replay).back().state;
    EXPECT_EQ(r.stats.sides[0].damage_dealt, env::config::kMaxHp - end.fighters[1].hp);
    EXPECT_EQ(r.stats.sides[1].damage_dealt, env::config::kMaxHp - end.fighters[0].hp);
    EXPECT_EQ(r.stats.winner, end.winner);
  }
}

TEST(Match, StatsJsonKeys) {
  NoopController a, b;
  const auto j = stats_to_json(run_matches(roster(), a, b, setups(1))[0].stats);
  EXPECT_EQ(j["winner"], "draw");
  EXPECT_EQ(j["sides"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["mean_distance_norm"].get<double>(), 0.35);
}
