#include "tta/gm/playing_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tta/archive/archive.hpp"

namespace tta::gm {

std::string to_string(MatchWinner w) {
  switch (w) {
    case MatchWinner::Player: return "player";
    case MatchWinner::Agent: return "agent";
    case MatchWinner::Draw: return "draw";
  }
  return "draw";
}

MatchWinner parse_match_winner(std::string_view s) {
  if (s == "player") return MatchWinner::Player;
  if (s == "agent") return MatchWinner::Agent;
  if (s == "draw") return MatchWinner::Draw;
  throw std::invalid_argument("unknown winner '" + std::string(s) + "'");
}

namespace {

nlohmann::ordered_json opponent_json(const OpponentInfo& o) {
  nlohmann::ordered_json j;
  j["type"] = o.type;
  j["character"] = o.character;
  j["model_path"] = o.model_path;
  j["difficulty"] = o.difficulty;
  return j;
}

OpponentInfo opponent_from(const nlohmann::json& j) {
  return {j.at("type").get<std::string>(), j.at("character").get<std::string>(),
          j.at("model_path").get<std::string>(), j.at("difficulty").get<std::string>()};
}

std::size_t utf8_length(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

void bump(std::vector<std::pair<std::string, int>>& counts, const std::string& key) {
  for (auto& [k, v] : counts)
    if (k == key) {
      ++v;
      return;
    }
  counts.emplace_back(key, 1);
}

}  // namespace

nlohmann::json summary_to_json(const MatchSummary& m) {
  return {{"opponent", opponent_json(m.opponent)},
          {"player_character", m.player_character},
          {"winner", to_string(m.winner)},
          {"player_special_moves", m.player_special_moves},
          {"agent_special_moves", m.agent_special_moves},
          {"mean_distance", m.mean_distance},
          {"player_projectiles", m.player_projectiles},
          {"agent_projectiles", m.agent_projectiles},
          {"score", m.score},
          {"feedback", m.feedback},
          {"started_at_ms", m.started_at_ms},
          {"finished_at_ms", m.finished_at_ms}};
}

MatchSummary summary_from_json(const nlohmann::json& d) {
  MatchSummary m;
  m.opponent = opponent_from(d.at("opponent"));
  m.player_character = d.at("player_character").get<std::string>();
  m.winner = parse_match_winner(d.at("winner").get<std::string>());
  m.player_special_moves = d.at("player_special_moves").get<int>();
  m.agent_special_moves = d.at("agent_special_moves").get<int>();
  m.mean_distance = d.at("mean_distance").get<double>();
  m.player_projectiles = d.at("player_projectiles").get<int>();
  m.agent_projectiles = d.at("agent_projectiles").get<int>();
  m.score = d.at("score").get<int>();
  m.feedback = d.at("feedback").get<std::string>();
  m.started_at_ms = d.at("started_at_ms").get<std::int64_t>();
  m.finished_at_ms = d.at("finished_at_ms").get<std::int64_t>();
  return m;
}

int match_score(MatchWinner winner, int player_hp, int agent_hp, int max_hp) {
  if (max_hp <= 0) throw std::invalid_argument("max_hp must be positive");
  const auto clamp_hp = [&](int hp) { return std::clamp(hp, 0, max_hp); };
  const double frac = winner == MatchWinner::Player
                          ? static_cast<double>(clamp_hp(player_hp)) / max_hp
                          : static_cast<double>(max_hp - clamp_hp(agent_hp)) / max_hp;
  return static_cast<int>(std::lround(100.0 * frac));
}

nlohmann::ordered_json PlayingData::to_json() const {
  nlohmann::ordered_json j;
  j["current_character"] = current_character;
  j["total_matches"] = total_matches;
  j["win_rate"] = win_rate;
  j["total_wins"] = total_wins;
  j["total_losses"] = total_losses;
  j["current_win_streak"] = current_win_streak;
  j["current_loss_streak"] = current_loss_streak;
  j["average_score_per_match"] = average_score_per_match;
  j["average_special_moves_per_match"] = average_special_moves_per_match;
  nlohmann::ordered_json agents = nlohmann::ordered_json::object();
  for (const auto& [k, v] : faced_agents_times) agents[k] = v;
  j["faced_agents_times"] = std::move(agents);
  nlohmann::ordered_json chars = nlohmann::ordered_json::object();
  for (const auto& [k, v] : faced_characters_times) chars[k] = v;
  j["faced_characters_times"] = std::move(chars);
  j["the_last_opponents"] = opponent_json(the_last_opponents);
  j["player's_feedback"] = players_feedback;
  return j;
}

PlayingData PlayingData::from_json(const nlohmann::ordered_json& d) {
  PlayingData p;
  p.current_character = d.at("current_character").get<std::string>();
  p.total_matches = d.at("total_matches").get<int>();
  p.win_rate = d.at("win_rate").get<double>();
  p.total_wins = d.at("total_wins").get<int>();
  p.total_losses = d.at("total_losses").get<int>();
  p.current_win_streak = d.at("current_win_streak").get<int>();
  p.current_loss_streak = d.at("current_loss_streak").get<int>();
  p.average_score_per_match = d.at("average_score_per_match").get<std::string>();
  p.average_special_moves_per_match = d.at("average_special_moves_per_match").get<double>();
  for (const auto& [k, v] : d.at("faced_agents_times").items()) p.faced_agents_times.emplace_back(k, v.get<int>());
  for (const auto& [k, v] : d.at("faced_characters_times").items())
    p.faced_characters_times.emplace_back(k, v.get<int>());
  p.the_last_opponents = opponent_from(d.at("the_last_opponents"));
  p.players_feedback = d.at("player's_feedback").get<std::string>();
  return p;
}

PlayingData fresh_playing_data(const std::string& character, const env::Roster& roster) {
  PlayingData p;
  p.current_character = character;
  for (const auto t : archive::kAgentTypes) p.faced_agents_times.emplace_back(std::string(t), 0);
  for (const auto& name : roster.names()) p.faced_characters_times.emplace_back(name, 0);
  return p;
}

PlayingData update_playing_data(PlayingData d, const MatchSummary& m) {
  ++d.total_matches;
  switch (m.winner) {
    case MatchWinner::Player:
      ++d.total_wins;
      ++d.current_win_streak;
      d.current_loss_streak = 0;
      break;
    case MatchWinner::Agent:
      ++d.total_losses;
      ++d.current_loss_streak;
      d.current_win_streak = 0;
      break;
    case MatchWinner::Draw:
      d.current_win_streak = 0;
      d.current_loss_streak = 0;
      break;
  }
  d.win_rate = static_cast<double>(d.total_wins) / std::max(1, d.total_matches);
  d.score_sum += m.score;
  d.special_moves_sum += m.player_special_moves;
  const double mean_score = static_cast<double>(d.score_sum) / d.total_matches;
  d.average_score_per_match = std::to_string(std::lround(mean_score)) + "/100";
  d.average_special_moves_per_match = static_cast<double>(d.special_moves_sum) / d.total_matches;
  bump(d.faced_agents_times, m.opponent.type);
  bump(d.faced_characters_times, m.opponent.character);
  d.the_last_opponents = m.opponent;
  set_feedback(d, m.feedback);
  return d;
}

void set_feedback(PlayingData& data, const std::string& text) {
  if (utf8_length(text) > kMaxFeedbackChars)
    throw std::invalid_argument("feedback longer than " + std::to_string(kMaxFeedbackChars) + " characters");
  data.players_feedback = text;
}

}  // namespace tta::gm
