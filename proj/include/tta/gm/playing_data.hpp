#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/roster.hpp"

namespace tta::gm {

inline constexpr std::size_t kMaxFeedbackChars = 2000;

enum class MatchWinner { Player, Agent, Draw };
std::string to_string(MatchWinner w);
MatchWinner parse_match_winner(std::string_view s);

struct OpponentInfo {
  std::string type;
  std::string character;
  std::string model_path;
  std::string difficulty;
  bool operator==(const OpponentInfo&) const = default;
};

/// One finished match from the player's point of view.
struct MatchSummary {
  OpponentInfo opponent;
  std::string player_character;
  MatchWinner winner = MatchWinner::Draw;
  int player_special_moves = 0;
  int agent_special_moves = 0;
  double mean_distance = 0.0;
  int player_projectiles = 0;
  int agent_projectiles = 0;
  int score = 0;  // 0..100
  std::string feedback;
  std::int64_t started_at_ms = 0;
  std::int64_t finished_at_ms = 0;
  bool operator==(const MatchSummary&) const = default;
};

nlohmann::json summary_to_json(const MatchSummary& m);
MatchSummary summary_from_json(const nlohmann::json& doc);

/// Score of a match for the player: on a win, the winner's remaining hp
/// fraction; otherwise the fraction of the opponent's hp the player took.
int match_score(MatchWinner winner, int player_hp, int agent_hp, int max_hp);

/// The per-player record the selector sees. Key order and names follow the
/// playing-data schema exactly.
struct PlayingData {
  std::string current_character;
  int total_matches = 0;
  double win_rate = 0.0;
  int total_wins = 0;
  int total_losses = 0;
  int current_win_streak = 0;
  int current_loss_streak = 0;
  std::string average_score_per_match = "0/100";
  double average_special_moves_per_match = 0.0;
  std::vector<std::pair<std::string, int>> faced_agents_times;
  std::vector<std::pair<std::string, int>> faced_characters_times;
  OpponentInfo the_last_opponents;
  std::string players_feedback;

  // Running sums behind the averages; not serialized.
  std::int64_t score_sum = 0;
  std::int64_t special_moves_sum = 0;

  nlohmann::ordered_json to_json() const;
  static PlayingData from_json(const nlohmann::ordered_json& doc);
  bool operator==(const PlayingData&) const = default;
};

/// Zeroed data for a player using `character`: every agent type and every
/// roster character starts at count 0.
PlayingData fresh_playing_data(const std::string& character, const env::Roster& roster);

/// Folds one match into the data. Counters, streaks, faced maps, averages and
/// the last opponent are updated; the feedback becomes the match's feedback.
PlayingData update_playing_data(PlayingData data, const MatchSummary& match);

/// Replaces the feedback string; throws std::invalid_argument when longer
/// than kMaxFeedbackChars.
void set_feedback(PlayingData& data, const std::string& text);

}  // namespace tta::gm
