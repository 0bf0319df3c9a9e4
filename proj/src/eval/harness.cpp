#include "tta/eval/harness.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tta/train/schedule.hpp"
#include "tta/util/files.hpp"

namespace tta::eval {

HeadToHeadReport run_series(std::shared_ptr<const env::Roster> roster, Controller& a, Controller& b,
                            int matches_per_character, std::uint64_t seed, int parallel) {
  if (matches_per_character < 1) throw std::invalid_argument("need at least one match per character");
  std::vector<SeriesMatch> slots;
  std::vector<MatchSetup> a_left, a_right;
  std::vector<std::size_t> a_left_idx, a_right_idx;
  for (int c = 0; c < roster->size(); ++c)
    for (int k = 0; k < matches_per_character; ++k) {
      const auto i = slots.size();
      SeriesMatch m;
      m.character = c;
      m.a_side = i % 2 == 0 ? env::Side::Left : env::Side::Right;
      const MatchSetup setup{c, c, train::derive_seed(seed, i)};
      (m.a_side == env::Side::Left ? a_left : a_right).push_back(setup);
      (m.a_side == env::Side::Left ? a_left_idx : a_right_idx).push_back(i);
      slots.push_back(std::move(m));
    }
  auto left = run_matches(roster, a, b, a_left, parallel);
  auto right = run_matches(roster, b, a, a_right, parallel);
  for (std::size_t j = 0; j < left.size(); ++j) slots[a_left_idx[j]].record = std::move(left[j]);
  for (std::size_t j = 0; j < right.size(); ++j) slots[a_right_idx[j]].record = std::move(right[j]);

  HeadToHeadReport r;
  r.n_matches = static_cast<int>(slots.size());
  for (const auto& m : slots) {
    if (m.a_won()) ++r.a_wins;
    else if (m.b_won()) ++r.b_wins;
    else ++r.draws;
  }
  r.win_rate = static_cast<double>(r.a_wins) / r.n_matches;
  r.matches = std::move(slots);
  return r;
}

nlohmann::json series_to_json(const HeadToHeadReport& r, const env::Roster& roster) {
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& m : r.matches) {
    auto j = stats_to_json(m.record.stats);
    j["character"] = roster.at(m.character).name;
    j["a_side"] = std::string(env::to_string(m.a_side));
    j["a_won"] = m.a_won();
    j["seed"] = m.record.setup.seed;
    matches.push_back(std::move(j));
  }
  return {{"n_matches", r.n_matches},
          {"a_wins", r.a_wins},
          {"b_wins", r.b_wins},
          {"draws", r.draws},
          {"win_rate", r.win_rate},
          {"matches", std::move(matches)}};
}

std::vector<RoundSample> play_rounds(std::shared_ptr<const env::Roster> roster, Controller& agent,
                                     const std::vector<Controller*>& opponents, int n_rounds, std::uint64_t seed,
                                     int parallel) {
  if (n_rounds < 1) throw std::invalid_argument("need at least one round");
  if (opponents.empty()) throw std::invalid_argument("need at least one opponent");
  std::vector<RoundSample> out(n_rounds);
  // Group rounds by (opponent, side) so each group is one batched call.
  std::map<std::pair<std::size_t, int>, std::vector<int>> groups;
  for (int i = 0; i < n_rounds; ++i) {
    auto& s = out[i];
    // Opponent varies fastest, then character, then side, so every full
    // sweep plays each (opponent, character) pair once from each side.
    const int n_opp = static_cast<int>(opponents.size());
    s.opponent = i % n_opp;
    s.character = (i / n_opp) % roster->size();
    s.agent_side = (i / (n_opp * roster->size())) % 2 == 0 ? env::Side::Left : env::Side::Right;
    groups[{static_cast<std::size_t>(s.opponent), env::index(s.agent_side)}].push_back(i);
  }
  for (const auto& [key, idx] : groups) {
    std::vector<MatchSetup> setups;
    for (int i : idx) setups.push_back({out[i].character, out[i].character, train::derive_seed(seed, i)});
    Controller& opp = *opponents[key.first];
    const bool agent_left = key.second == env::index(env::Side::Left);
    auto recs = agent_left ? run_matches(roster, agent, opp, setups, parallel)
                           : run_matches(roster, opp, agent, setups, parallel);
    for (std::size_t j = 0; j < idx.size(); ++j) out[idx[j]].stats = recs[j].stats;
  }
  return out;
}

double special_moves_per_round(const std::vector<RoundSample>& rounds) {
  return behavior_metrics(rounds).special_moves_per_round;
}

BehaviorMetrics behavior_metrics(const std::vector<RoundSample>& rounds) {
  BehaviorMetrics m;
  m.rounds = static_cast<int>(rounds.size());
  if (rounds.empty()) return m;
  double dist = 0.0, proj = 0.0, spec = 0.0, wins = 0.0;
  for (const auto& r : rounds) {
    const auto& side = r.stats.sides[env::index(r.agent_side)];
    dist += r.stats.mean_distance();
    proj += side.projectiles_fired;
    spec += side.special_moves;
    wins += r.stats.won_by(r.agent_side);
  }
  const double n = static_cast<double>(rounds.size());
  m.mean_distance_norm = dist / n;
  m.projectiles_per_match = proj / n;
  m.special_moves_per_round = spec / n;
  m.win_rate = wins / n;
  return m;
}

nlohmann::json behavior_to_json(const BehaviorMetrics& m) {
  return {{"rounds", m.rounds},
          {"mean_distance_norm", m.mean_distance_norm},
          {"projectiles_per_match", m.projectiles_per_match},
          {"special_moves_per_round", m.special_moves_per_round},
          {"win_rate", m.win_rate}};
}

QuestionnaireSchema QuestionnaireSchema::from_json(const nlohmann::json& doc) {
  QuestionnaireSchema s;
  try {
    for (const auto& g : doc.at("groups")) s.groups.push_back(g.get<std::string>());
    for (const auto& m : doc.at("metrics")) {
      std::map<std::string, int> scale;
      for (const auto& [label, v] : m.at("answers").items()) scale[label] = v.get<int>();
      std::multiset<int> values;
      for (const auto& [_, v] : scale) values.insert(v);
      if (values != std::multiset<int>{0, 1, 2, 3})
        throw QuestionnaireError("metric '" + m.at("name").get<std::string>() +
                                 "' must map exactly four answers onto 3, 2, 1, 0");
      s.metrics.emplace_back(m.at("name").get<std::string>(), std::move(scale));
    }
  } catch (const nlohmann::json::exception& e) {
    throw QuestionnaireError("malformed questionnaire schema: " + std::string(e.what()));
  }
  if (s.groups.empty() || s.metrics.empty()) throw QuestionnaireError("schema needs groups and metrics");
  return s;
}

QuestionnaireSchema QuestionnaireSchema::load(const std::filesystem::path& path) {
  const auto doc = nlohmann::json::parse(util::read_file(path), nullptr, false);
  if (doc.is_discarded()) throw QuestionnaireError(path.string() + " is not JSON");
  return from_json(doc);
}

EnjoyabilityScores score_questionnaire(const QuestionnaireSchema& schema, std::string_view jsonl) {
  std::map<std::string, std::map<std::string, int>> sums;
  EnjoyabilityScores out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(lineno) + ": ";
    const auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) throw QuestionnaireError(where + "not a JSON object");
    if (!rec.contains("group") || !rec["group"].is_string()) throw QuestionnaireError(where + "missing group");
    const auto group = rec["group"].get<std::string>();
    if (std::find(schema.groups.begin(), schema.groups.end(), group) == schema.groups.end())
      throw QuestionnaireError(where + "unknown group '" + group + "'");
    if (!rec.contains("answers") || !rec["answers"].is_object()) throw QuestionnaireError(where + "missing answers");
    const auto& answers = rec["answers"];
    for (const auto& [metric, _] : answers.items())
      if (std::none_of(schema.metrics.begin(), schema.metrics.end(), [&](const auto& m) { return m.first == metric; }))
        throw QuestionnaireError(where + "unknown metric '" + metric + "'");
    for (const auto& [metric, scale] : schema.metrics) {
      if (!answers.contains(metric) || !answers[metric].is_string())
        throw QuestionnaireError(where + "no answer for '" + metric + "'");
      const auto label = answers[metric].get<std::string>();
      const auto it = scale.find(label);
      if (it == scale.end()) throw QuestionnaireError(where + "unknown answer '" + label + "' for '" + metric + "'");
      sums[group][metric] += it->second;
    }
    ++out.respondents[group];
  }
  for (const auto& [group, metrics] : sums)
    for (const auto& [metric, total] : metrics)
      out.means[group][metric] = static_cast<double>(total) / out.respondents[group];
  return out;
}

EnjoyabilityScores score_questionnaire_file(const QuestionnaireSchema& schema, const std::filesystem::path& path) {
  return score_questionnaire(schema, util::read_file(path));
}

nlohmann::json scores_to_json(const EnjoyabilityScores& s) {
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [g, metrics] : s.means) {
    groups[g]["respondents"] = s.respondents.at(g);
    for (const auto& [m, v] : metrics) groups[g]["means"][m] = v;
  }
  return {{"groups", std::move(groups)}};
}

}  // namespace tta::eval
