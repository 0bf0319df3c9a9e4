#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "tta/eval/match.hpp"
#include "tta/gm/game_manager.hpp"
#include "tta/gm/store.hpp"
#include "tta/util/files.hpp"

using namespace tta;
using namespace tta::gm;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TTA_DATA_DIR;

MatchSummary match(MatchWinner w, const std::string& type, const std::string& character, int score,
                   int specials = 0) {
  MatchSummary m;
  m.opponent = {type, character, "agent_models/agents_archive/" + type + "/1_0.5", "5/10-(Medium)"};
  m.player_character = "Ryu";
  m.winner = w;
  m.score = score;
  m.player_special_moves = specials;
  return m;
}

std::vector<std::string> keys(const nlohmann::ordered_json& j) {
  std::vector<std::string> out;
  for (const auto& [k, _] : j.items()) out.push_back(k);
  return out;
}

}  // namespace

TEST(PlayingDataTest, KeysAndOrderMatchTheSchemaExample) {
  const auto example = nlohmann::ordered_json::parse(util::read_file(kData / "gm" / "playing_data_example.json"));
  const auto fresh = fresh_playing_data("Ryu", env::default_roster()).to_json();
  EXPECT_EQ(keys(fresh), keys(example));
  EXPECT_EQ(keys(fresh["faced_agents_times"]), keys(example["faced_agents_times"]));
  EXPECT_EQ(keys(fresh["the_last_opponents"]), keys(example["the_last_opponents"]));
  const auto kind = [](const nlohmann::ordered_json& v) {
    return v.is_number() ? std::string("number") : std::string(v.type_name());
  };
  for (const auto& [k, v] : example.items()) EXPECT_EQ(kind(fresh[k]), kind(v)) << k;
  EXPECT_EQ(PlayingData::from_json(example).to_json().dump(2), example.dump(2));
}

TEST(PlayingDataTest, FreshDataListsEveryTypeAndCharacterAtZero) {
  const auto& roster = env::default_roster();
  const auto d = fresh_playing_data("Zangief", roster);
  EXPECT_EQ(d.faced_agents_times.size(), archive::kAgentTypes.size());
  EXPECT_EQ(d.faced_characters_times.size(), static_cast<size_t>(roster.size()));
  for (const auto& [_, n] : d.faced_agents_times) EXPECT_EQ(n, 0);
  EXPECT_EQ(d.to_json()["win_rate"], 0.0);
  EXPECT_EQ(d.average_score_per_match, "0/100");
}

TEST(PlayingDataTest, FiveWinsOneLossLikeTheExample) {
  auto d = fresh_playing_data("Ryu", env::default_roster());
  d = update_playing_data(d, match(MatchWinner::Player, "projectile_type", "Ryu", 70, 9));
  d = update_playing_data(d, match(MatchWinner::Player, "projectile_type", "Ken", 60, 10));
  d = update_playing_data(d, match(MatchWinner::Agent, "defensive_type", "Ryu", 40, 8));
  d = update_playing_data(d, match(MatchWinner::Player, "projectile_type", "Zangief", 65, 11));
  d = update_playing_data(d, match(MatchWinner::Player, "air_type", "Ken", 70, 10));
  auto last = match(MatchWinner::Player, "aggressive_type", "EHonda", 73, 9);
  last.opponent.model_path = "agent_models/agents_archive/aggressive_type/1_0.22";
  last.feedback = "This match is too simple, the enemy didn't perform any effective attack at all";
  d = update_playing_data(d, last);
  const auto j = d.to_json();
  EXPECT_EQ(j["win_rate"].dump(), "0.8333333333333334");
  EXPECT_EQ(d.total_matches, 6);
  EXPECT_EQ(d.total_wins, 5);
  EXPECT_EQ(d.total_losses, 1);
  EXPECT_EQ(d.current_win_streak, 3);
  EXPECT_EQ(d.current_loss_streak, 0);
  EXPECT_EQ(d.average_score_per_match, "63/100");  // 378 / 6
  EXPECT_DOUBLE_EQ(d.average_special_moves_per_match, 9.5);
  EXPECT_EQ(j["faced_agents_times"]["projectile_type"], 3);
  EXPECT_EQ(j["faced_characters_times"]["Ken"], 2);
  EXPECT_EQ(j["the_last_opponents"]["character"], "EHonda");
  EXPECT_EQ(j["the_last_opponents"]["difficulty"], "5/10-(Medium)");
  EXPECT_EQ(j["player's_feedback"], last.feedback);
}

TEST(PlayingDataTest, InvariantsHoldForRandomSequences) {
  std::mt19937 gen(11);
  const auto& roster = env::default_roster();
  for (int trial = 0; trial < 200; ++trial) {
    auto d = fresh_playing_data("Ken", roster);
    const int n = std::uniform_int_distribution<int>(0, 30)(gen);
    int run = 0;
    MatchWinner prev = MatchWinner::Draw;
    for (int i = 0; i < n; ++i) {
      const auto w = static_cast<MatchWinner>(std::uniform_int_distribution<int>(0, 2)(gen));
      const auto& type = archive::kAgentTypes[std::uniform_int_distribution<size_t>(0, 7)(gen)];
      const auto& ch = roster.at(std::uniform_int_distribution<int>(0, roster.size() - 1)(gen)).name;
      d = update_playing_data(d, match(w, std::string(type), ch, std::uniform_int_distribution<int>(0, 100)(gen)));
      run = (w != MatchWinner::Draw && w == prev) ? run + 1 : (w == MatchWinner::Draw ? 0 : 1);
      prev = w;
    }
    EXPECT_EQ(d.total_matches, n);
    EXPECT_LE(d.total_wins + d.total_losses, d.total_matches);
    EXPECT_EQ(d.win_rate, n ? static_cast<double>(d.total_wins) / n : 0.0);
    EXPECT_TRUE(d.current_win_streak == 0 || d.current_loss_streak == 0);
    EXPECT_EQ(d.current_win_streak, prev == MatchWinner::Player ? run : 0);
    EXPECT_EQ(d.current_loss_streak, prev == MatchWinner::Agent ? run : 0);
    int agents = 0, chars = 0;
    for (const auto& [_, c] : d.faced_agents_times) agents += c;
    for (const auto& [_, c] : d.faced_characters_times) chars += c;
    EXPECT_EQ(agents, n);
    EXPECT_EQ(chars, n);
    EXPECT_EQ(PlayingData::from_json(d.to_json()).to_json(), d.to_json());
  }
}

TEST(PlayingDataTest, FeedbackLimitCountsCodePoints) {
  auto d = fresh_playing_data("Ryu", env::default_roster());
  std::string ok;
  for (size_t i = 0; i < kMaxFeedbackChars; ++i) ok += "\xc3\xa9";  // two bytes, one character
  EXPECT_NO_THROW(set_feedback(d, ok));
  EXPECT_EQ(d.players_feedback, ok);
  EXPECT_THROW(set_feedback(d, ok + "x"), std::invalid_argument);
  EXPECT_EQ(d.players_feedback, ok);
  set_feedback(d, "");
  EXPECT_EQ(d.to_json()["player's_feedback"], "");
}

TEST(PlayingDataTest, MatchScore) {
  EXPECT_EQ(match_score(MatchWinner::Player, 176, 0, 176), 100);
  EXPECT_EQ(match_score(MatchWinner::Player, 88, 0, 176), 50);
  EXPECT_EQ(match_score(MatchWinner::Agent, 0, 132, 176), 25);
  EXPECT_EQ(match_score(MatchWinner::Draw, 40, 40, 176), 77);
  EXPECT_THROW(match_score(MatchWinner::Player, 1, 1, 0), std::invalid_argument);
}

TEST(PlayingDataTest, SummaryJsonRoundTrip) {
  auto m = match(MatchWinner::Draw, "coward_type", "Ken", 42, 3);
  m.mean_distance = 0.25;
  m.finished_at_ms = 123;
  EXPECT_EQ(summary_from_json(summary_to_json(m)), m);
}

TEST(StoreTest, PersistsAcrossReopen) {
  const auto dir = test_support::fresh_dir("store");
  {
    Store s(dir / "tta.sqlite3");
    EXPECT_EQ(s.schema_version(), Store::kSchemaVersion);
    s.put_session({"abc", "Ryu", "awaiting_selection", {{"k", 1}}, 5});
    s.add_match({"abc", 1, {{"score", 3}}, nullptr});
    s.add_match({"abc", 2, {{"score", 4}}, {{"inputs", nlohmann::json::array()}}});
    s.update_match_summary("abc", 1, {{"score", 9}});
    EXPECT_THROW(s.add_match({"abc", 2, {}, nullptr}), StoreError);
  }
  Store s(dir / "tta.sqlite3");
  EXPECT_EQ(s.session_ids(), std::vector<std::string>{"abc"});
  EXPECT_EQ(s.session("abc")->playing_data["k"], 1);
  EXPECT_FALSE(s.session("zzz"));
  const auto ms = s.matches("abc");
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].summary["score"], 9);
  EXPECT_TRUE(ms[0].replay.is_null());
  EXPECT_TRUE(ms[1].replay.is_object());
  fs::remove_all(dir);
}

class GameManagerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = test_support::fresh_dir("gm_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    archive_ = test_support::tiny_archive(dir_, {"projectile_type", "coward_type", "newbie_type"});
    store_ = std::make_shared<Store>(dir_ / "tta.sqlite3");
  }
  void TearDown() override { fs::remove_all(dir_); }

  GameManager make(std::shared_ptr<llm::LlmClient> client = nullptr, std::uint64_t seed = 1) {
    GameManagerOptions o;
    o.seed = seed;
    return GameManager(archive_, store_, std::move(client), o);
  }

  std::string valid_output() const {
    const auto& r = archive_->records()[1];
    return "Coward agent suits this player.\n{\"chosen_agent_type\": \"" + r.agent_type +
           "\", \"chosen_agent_model_path\": \"" + r.model_path + "\", \"chosen_agent_character\": \"Ken\"}";
  }

  fs::path dir_;
  std::shared_ptr<archive::AgentArchive> archive_;
  std::shared_ptr<Store> store_;
  eval::NoopController noop_;
};

TEST_F(GameManagerTest, RejectsUnknownCharacterAndSession) {
  auto gm = make();
  try {
    gm.start_session("Guile");
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "unknown_character");
  }
  try {
    gm.session("nope");
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "unknown_session");
  }
  EXPECT_EQ(gm.session(gm.start_session("Honda")).character, "EHonda");
}

TEST_F(GameManagerTest, RandomSelectionCoversArchiveAndRoster) {
  auto gm = make(nullptr, 5);
  std::set<std::string> paths, chars;
  for (int i = 0; i < 1000; ++i) {
    const auto n = gm.random_selection();
    EXPECT_EQ(n.source, SelectionSource::Random);
    EXPECT_FALSE(archive::check_selection(gm.manifest(), gm.roster(), llm::to_archive_selection(n.selection)));
    paths.insert(n.selection.chosen_agent_model_path);
    chars.insert(n.selection.chosen_agent_character);
  }
  EXPECT_EQ(paths.size(), archive_->records().size());
  EXPECT_EQ(chars.size(), static_cast<size_t>(gm.roster().size()));
}

TEST_F(GameManagerTest, EmptyArchiveIsAnError) {
  GameManager gm(std::make_shared<archive::AgentArchive>(dir_ / "empty"), nullptr, nullptr);
  const auto id = gm.start_session("Ryu");
  try {
    gm.request_next_opponent(id, SelectionMode::Random);
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "empty_archive");
  }
}

TEST_F(GameManagerTest, LlmModeUsesTheSelector) {
  auto client = std::make_shared<llm::ScriptedClient>(std::vector<std::string>{"no json", valid_output()});
  auto gm = make(client);
  const auto id = gm.start_session("Ryu");
  const auto n = gm.request_next_opponent(id, SelectionMode::Llm);
  EXPECT_EQ(n.source, SelectionSource::Llm);
  EXPECT_EQ(n.attempts.size(), 2u);
  EXPECT_EQ(n.selection.chosen_agent_character, "Ken");
  EXPECT_EQ(n.difficulty, "5/10-(Medium)");
  EXPECT_EQ(gm.session(id).pending->selection, n.selection);
  EXPECT_EQ(next_opponent_to_json(n)["source"], "llm");
}

TEST_F(GameManagerTest, ExhaustedSelectorFallsBackToRandom) {
  auto client = std::make_shared<llm::ScriptedClient>(std::vector<std::string>{"still no json"});
  auto gm = make(client);
  const auto id = gm.start_session("Ryu");
  const auto n = gm.request_next_opponent(id, SelectionMode::Llm);
  EXPECT_EQ(n.source, SelectionSource::RandomFallback);
  EXPECT_EQ(n.attempts.size(), 3u);
  EXPECT_EQ(client->calls(), 3);
  EXPECT_FALSE(archive::check_selection(gm.manifest(), gm.roster(), llm::to_archive_selection(n.selection)));
}

TEST_F(GameManagerTest, FullLoopUpdatesPlayingDataAndPhases) {
  auto gm = make();
  const auto id = gm.start_session("Ryu");
  EXPECT_EQ(gm.session(id).phase, Phase::AwaitingSelection);
  try {
    gm.collect_feedback(id, "early");
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "wrong_phase");
  }
  try {
    gm.run_pending_match(id, noop_);
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "no_selection");
  }
  gm.request_next_opponent(id, SelectionMode::Random);
  const auto pm = gm.run_pending_match(id, noop_);
  EXPECT_EQ(pm.seq, 1);
  EXPECT_FALSE(pm.forfeit);
  ASSERT_TRUE(pm.replay);
  EXPECT_EQ(pm.summary.player_special_moves, 0);
  EXPECT_NE(pm.summary.winner, MatchWinner::Player);  // a noop player cannot deal damage
  EXPECT_EQ(gm.session(id).phase, Phase::AwaitingFeedback);
  EXPECT_FALSE(gm.session(id).pending);
  try {
    gm.request_next_opponent(id, SelectionMode::Random);
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "wrong_phase");
  }
  try {
    gm.collect_feedback(id, std::string(kMaxFeedbackChars + 1, 'x'));
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "feedback_too_long");
  }
  const auto d = gm.collect_feedback(id, "too easy");
  EXPECT_EQ(d.total_matches, 1);
  EXPECT_EQ(d.players_feedback, "too easy");
  EXPECT_EQ(d.the_last_opponents, pm.summary.opponent);
  EXPECT_EQ(gm.session(id).phase, Phase::AwaitingSelection);
  EXPECT_EQ(gm.session(id).feedback_history, std::vector<std::string>{"too easy"});
  gm.close_session(id);
  EXPECT_EQ(gm.session(id).phase, Phase::Closed);
}

TEST_F(GameManagerTest, InvalidSelectionIsRejectedBeforePlaying) {
  auto gm = make();
  const auto id = gm.start_session("Ryu");
  try {
    gm.run_match(id, {"projectile_type", "agent_models/agents_archive/projectile_type/none", "Ryu"}, noop_);
    FAIL();
  } catch (const GmError& e) {
    EXPECT_EQ(e.code(), "unknown_path");
  }
  EXPECT_EQ(gm.session(id).phase, Phase::AwaitingSelection);
  EXPECT_TRUE(gm.matches(id).empty());
}

TEST_F(GameManagerTest, ReplayReproducesTheMatch) {
  auto gm = make();
  const auto id = gm.start_session("Ken");
  eval::RandomController player;
  gm.request_next_opponent(id, SelectionMode::Random);
  const auto pm = gm.run_pending_match(id, player);
  ASSERT_TRUE(pm.replay);
  EXPECT_EQ(eval::stats_from_replay(gm.roster(), *pm.replay), pm.stats);
  const auto again = env::replay_from_json(env::replay_to_json(*pm.replay));
  EXPECT_EQ(again, *pm.replay);
}

TEST_F(GameManagerTest, SessionsReloadFromTheStore) {
  std::string id;
  PlayingData before;
  {
    auto gm = make();
    id = gm.start_session("Zangief");
    for (int i = 0; i < 2; ++i) {
      gm.request_next_opponent(id, SelectionMode::Random);
      gm.run_pending_match(id, noop_);
      gm.collect_feedback(id, "round " + std::to_string(i));
    }
    before = gm.playing_data(id);
  }
  auto gm = make();
  const auto view = gm.session(id);
  EXPECT_EQ(view.character, "Zangief");
  EXPECT_EQ(view.playing_data.to_json(), before.to_json());
  EXPECT_EQ(view.feedback_history, (std::vector<std::string>{"round 0", "round 1"}));
  const auto ms = gm.matches(id);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_TRUE(ms[1].replay);
  EXPECT_EQ(ms[1].summary.feedback, "round 1");
}

TEST_F(GameManagerTest, ForfeitCountsAsALossWithoutReplay) {
  struct Quitter : eval::Controller {
    int calls = 0;
    std::string name() const override { return "quitter"; }
    std::vector<env::ButtonVector> act(std::span<const eval::ControlContext> batch) override {
      if (++calls > 5) throw MatchForfeit(*batch[0].state, "player left");
      return std::vector<env::ButtonVector>(batch.size());
    }
  } quitter;
  auto gm = make();
  const auto id = gm.start_session("Ryu");
  gm.request_next_opponent(id, SelectionMode::Random);
  const auto pm = gm.run_pending_match(id, quitter);
  EXPECT_TRUE(pm.forfeit);
  EXPECT_FALSE(pm.replay);
  EXPECT_EQ(pm.summary.winner, MatchWinner::Agent);
  EXPECT_EQ(gm.playing_data(id).total_losses, 1);
  EXPECT_TRUE(store_->matches(id)[0].replay.is_null());
}
