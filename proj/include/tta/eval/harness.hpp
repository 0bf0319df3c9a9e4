#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/eval/match.hpp"

namespace tta::eval {

struct SeriesMatch {
  int character = 0;
  env::Side a_side = env::Side::Left;
  MatchRecord record;
  bool a_won() const { return record.stats.won_by(a_side); }
  bool b_won() const { return record.stats.won_by(env::opposite(a_side)); }
};

struct HeadToHeadReport {
  int n_matches = 0;
  int a_wins = 0;
  int b_wins = 0;
  int draws = 0;
  double win_rate = 0.0;  // a's wins over all matches
  std::vector<SeriesMatch> matches;
};

/// Mirror matches over the whole roster: both sides play the same character,
/// `matches_per_character` times each. Sides alternate through the series,
/// so each agent spends within one match as much time on either side.
HeadToHeadReport run_series(std::shared_ptr<const env::Roster> roster, Controller& a, Controller& b,
                            int matches_per_character, std::uint64_t seed, int parallel = 16);

nlohmann::json series_to_json(const HeadToHeadReport& r, const env::Roster& roster);

struct RoundSample {
  int character = 0;
  int opponent = 0;  // index into the opponent set
  env::Side agent_side = env::Side::Left;
  MatchStats stats;
};

/// Rounds of `agent` against a set of opponents in mirror matches. Rounds
/// sweep opponents, then characters, then sides; a multiple of
/// 2 * opponents * roster size is exactly side-balanced.
std::vector<RoundSample> play_rounds(std::shared_ptr<const env::Roster> roster, Controller& agent,
                                     const std::vector<Controller*>& opponents, int n_rounds, std::uint64_t seed,
                                     int parallel = 16);

/// Mean special moves per round by the agent.
double special_moves_per_round(const std::vector<RoundSample>& rounds);

struct BehaviorMetrics {
  double mean_distance_norm = 0.0;     // mean over rounds of the per-round mean
  double projectiles_per_match = 0.0;  // agent's projectiles
  double special_moves_per_round = 0.0;
  double win_rate = 0.0;
  int rounds = 0;
};

BehaviorMetrics behavior_metrics(const std::vector<RoundSample>& rounds);
nlohmann::json behavior_to_json(const BehaviorMetrics& m);

class QuestionnaireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Answer vocabulary per metric; every metric maps four labels onto 3, 2, 1, 0.
struct QuestionnaireSchema {
  std::vector<std::pair<std::string, std::map<std::string, int>>> metrics;
  std::vector<std::string> groups;

  static QuestionnaireSchema from_json(const nlohmann::json& doc);  // validates the scoring map
  static QuestionnaireSchema load(const std::filesystem::path& path);
};

struct EnjoyabilityScores {
  // group -> metric -> mean score
  std::map<std::string, std::map<std::string, double>> means;
  std::map<std::string, int> respondents;
};

/// Responses are JSON lines {respondent, group, answers: {metric: label}}.
/// Unknown groups, metrics or labels and missing answers fail loudly.
EnjoyabilityScores score_questionnaire(const QuestionnaireSchema& schema, std::string_view jsonl);
EnjoyabilityScores score_questionnaire_file(const QuestionnaireSchema& schema, const std::filesystem::path& path);
nlohmann::json scores_to_json(const EnjoyabilityScores& s);

}  // namespace tta::eval
