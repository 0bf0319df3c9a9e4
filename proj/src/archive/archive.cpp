#include "tta/archive/archive.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <regex>

#include "tta/policy/checkpoint.hpp"
#include "tta/util/files.hpp"

namespace tta::archive {

namespace fs = std::filesystem;

bool is_agent_type(std::string_view type) {
  return std::find(kAgentTypes.begin(), kAgentTypes.end(), type) != kAgentTypes.end();
}

std::string default_profile_for(std::string_view type) {
  if (type == "projectile_type" || type == "defensive_type") return "defensive";
  if (type == "special_move_type") return "special_move";
  if (type == "aggressive_type") return "aggressive";
  if (type == "air_type") return "air";
  if (type == "coward_type") return "coward";
  if (type == "newbie_type") return "newbie";
  if (type == "key_spamming_type") return "key_spamming";
  throw ArchiveError("unknown agent type '" + std::string(type) + "'");
}

std::string difficulty_label(int score) {
  if (score < 0 || score > 10) throw ArchiveError("difficulty score outside 0..10");
  if (score <= 1) return "Very Easy";
  if (score <= 3) return "Easy";
  if (score <= 6) return "Medium";
  if (score <= 9) return "Hard";
  return "Very Hard";
}

std::string Difficulty::text() const {
  return std::to_string(score) + "/10-(" + label + ")";
}

Difficulty difficulty_from_win_rate(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ArchiveError("win rate must lie in [0, 1]");
  // Ties round to even, so 0.05 scores 0 and 0.15 scores 2.
  const int old = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const int score = static_cast<int>(std::nearbyint(10.0 * w));
  std::fesetround(old);
  return {score, difficulty_label(score)};
}

std::optional<Difficulty> parse_difficulty(std::string_view text) {
  static const std::regex re(R"(^(10|[0-9])/10-\((Very Easy|Easy|Medium|Hard|Very Hard)\)$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, re)) return std::nullopt;
  Difficulty d{std::stoi(m[1].str()), m[2].str()};
  if (difficulty_label(d.score) != d.label) return std::nullopt;
  return d;
}

bool ArchiveManifest::empty() const {
  for (const auto& [_, t] : types_)
    if (!t.agent_models.empty()) return false;
  return true;
}

const TypeEntry* ArchiveManifest::find_type(std::string_view type) const {
  for (const auto& [name, t] : types_)
    if (name == type) return &t;
  return nullptr;
}

TypeEntry& ArchiveManifest::type_entry(const std::string& type) {
  for (auto& [name, t] : types_)
    if (name == type) return t;
  types_.emplace_back(type, TypeEntry{});
  return types_.back().second;
}

std::optional<std::string> ArchiveManifest::type_of(std::string_view model_path) const {
  for (const auto& [name, t] : types_)
    for (const auto& m : t.agent_models)
      if (m.model_path == model_path) return name;
  return std::nullopt;
}

const ModelEntry* ArchiveManifest::find_model(std::string_view model_path) const {
  for (const auto& [_, t] : types_)
    for (const auto& m : t.agent_models)
      if (m.model_path == model_path) return &m;
  return nullptr;
}

nlohmann::ordered_json ArchiveManifest::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [name, t] : types_) {
    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (const auto& m : t.agent_models) {
      nlohmann::ordered_json e;
      e["model_path"] = m.model_path;
      e["model_difficulty_score"] = m.model_difficulty_score;
      models.push_back(std::move(e));
    }
    nlohmann::ordered_json entry;
    entry["suggested_characters_for_this_type"] = t.suggested_characters;
    entry["agent_models"] = std::move(models);
    doc[name] = std::move(entry);
  }
  return doc;
}

ArchiveManifest ArchiveManifest::from_json(const nlohmann::ordered_json& doc) {
  if (!doc.is_object()) throw ArchiveError("archive manifest must be a JSON object");
  ArchiveManifest m;
  try {
    for (const auto& [name, entry] : doc.items()) {
      TypeEntry t;
      for (const auto& c : entry.at("suggested_characters_for_this_type"))
        t.suggested_characters.push_back(c.get<std::string>());
      for (const auto& e : entry.at("agent_models"))
        t.agent_models.push_back({e.at("model_path").get<std::string>(),
                                  e.at("model_difficulty_score").get<std::string>()});
      m.types_.emplace_back(name, std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArchiveError("malformed archive manifest: " + std::string(e.what()));
  }
  return m;
}

ArchiveManifest ArchiveManifest::parse(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ArchiveError("archive manifest is not JSON: " + std::string(e.what()));
  }
  return from_json(doc);
}

std::string ArchiveManifest::dump() const { return to_json().dump(4) + "\n"; }

nlohmann::json eval_to_json(const EvalSummary& e) {
  return {{"win_rate_vs_builtin", e.win_rate_vs_builtin},
          {"matches", e.matches},
          {"special_moves_per_round", e.special_moves_per_round}};
}

EvalSummary eval_from_json(const nlohmann::json& doc) {
  EvalSummary e;
  e.win_rate_vs_builtin = doc.at("win_rate_vs_builtin").get<double>();
  e.matches = doc.at("matches").get<int>();
  e.special_moves_per_round = doc.at("special_moves_per_round").get<double>();
  return e;
}

nlohmann::json record_to_json(const AgentRecord& r) {
  return {{"agent_type", r.agent_type},   {"model_path", r.model_path},
          {"difficulty_score", r.difficulty_score}, {"profile", r.profile},
          {"iteration", r.iteration},     {"eval", eval_to_json(r.eval)}};
}

AgentRecord record_from_json(const nlohmann::json& doc) {
  AgentRecord r;
  r.agent_type = doc.at("agent_type").get<std::string>();
  r.model_path = doc.at("model_path").get<std::string>();
  r.difficulty_score = doc.at("difficulty_score").get<std::string>();
  r.profile = doc.at("profile").get<std::string>();
  r.iteration = doc.at("iteration").get<int>();
  r.eval = eval_from_json(doc.at("eval"));
  return r;
}

std::string to_string(ResolveFailure f) {
  switch (f) {
    case ResolveFailure::UnknownType: return "unknown_type";
    case ResolveFailure::UnknownPath: return "unknown_path";
    case ResolveFailure::TypeMismatch: return "type_mismatch";
    case ResolveFailure::UnknownCharacter: return "unknown_character";
  }
  return "unknown";
}

std::optional<ResolveFailure> check_selection(const ArchiveManifest& manifest,
                                              const env::Roster& roster, const Selection& s) {
  const auto listed = manifest.type_of(s.model_path);
  if (!listed) return ResolveFailure::UnknownPath;
  if (!manifest.find_type(s.agent_type))
    return is_agent_type(s.agent_type) ? ResolveFailure::TypeMismatch : ResolveFailure::UnknownType;
  if (*listed != s.agent_type) return ResolveFailure::TypeMismatch;
  if (!roster.find(s.character)) return ResolveFailure::UnknownCharacter;
  return std::nullopt;
}

std::vector<std::string> default_suggested_characters(std::string_view type, const env::Roster& roster) {
  std::vector<std::string> out;
  for (const auto& c : roster.characters()) {
    bool keep = true;
    if (type == "projectile_type")
      keep = std::any_of(c.specials.begin(), c.specials.end(),
                         [](const env::SpecialMove& m) { return m.spawns_projectile; });
    else if (type == "special_move_type")
      keep = !c.specials.empty();
    if (keep) out.push_back(c.name);
  }
  return out;
}

AgentArchive::AgentArchive(fs::path root) : root_(std::move(root)) {
  const auto manifest_path = root_ / kManifestFile;
  if (fs::exists(manifest_path)) manifest_ = ArchiveManifest::parse(util::read_file(manifest_path));
  const auto records_path = root_ / kRecordsFile;
  if (fs::exists(records_path)) {
    try {
      for (const auto& r : nlohmann::json::parse(util::read_file(records_path)))
        records_.push_back(record_from_json(r));
    } catch (const nlohmann::json::exception& e) {
      throw ArchiveError("malformed archive records: " + std::string(e.what()));
    }
  }
}

fs::path AgentArchive::checkpoint_file(std::string_view model_path) const {
  auto p = root_ / fs::path(std::string(model_path));
  p += ".ckpt";
  return p;
}

void AgentArchive::publish() const {
  fs::create_directories(root_);
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : records_) records.push_back(record_to_json(r));
  util::write_file_atomic(root_ / kRecordsFile, records.dump(2) + "\n");
  util::write_file_atomic(root_ / kManifestFile, manifest_.dump());
}

AgentRecord AgentArchive::register_agent(const fs::path& checkpoint, const std::string& agent_type,
                                         const EvalSummary& eval,
                                         std::optional<std::vector<std::string>> suggested) {
  if (!is_agent_type(agent_type)) throw ArchiveError("unknown agent type '" + agent_type + "'");
  std::string reason;
  if (!policy::is_loadable_checkpoint(checkpoint, &reason))
    throw ArchiveError("checkpoint " + checkpoint.string() + " is not loadable: " + reason);
  if (eval.matches <= 0) throw ArchiveError("an evaluation summary is required before publishing");

  const auto header = policy::read_checkpoint_header(checkpoint);
  AgentRecord rec;
  rec.agent_type = agent_type;
  rec.model_path = std::string(kModelsDir) + "/" + agent_type + "/" + checkpoint.stem().string();
  if (manifest_.find_model(rec.model_path))
    throw ArchiveError("model path " + rec.model_path + " is already registered");
  rec.difficulty_score = difficulty_from_win_rate(eval.win_rate_vs_builtin).text();
  rec.profile = header.metadata.value("profile", default_profile_for(agent_type));
  rec.iteration = header.metadata.value("iteration", 0);
  rec.eval = eval;

  const auto dest = checkpoint_file(rec.model_path);
  fs::create_directories(dest.parent_path());
  fs::copy_file(checkpoint, dest, fs::copy_options::overwrite_existing);

  auto& entry = manifest_.type_entry(agent_type);
  if (suggested)
    entry.suggested_characters = *suggested;
  else if (entry.suggested_characters.empty())
    entry.suggested_characters = default_suggested_characters(agent_type, env::default_roster());
  entry.agent_models.push_back({rec.model_path, rec.difficulty_score});
  records_.push_back(rec);
  publish();
  return rec;
}

ResolvedAgent AgentArchive::resolve(const Selection& s, const env::Roster& roster) const {
  if (const auto failure = check_selection(manifest_, roster, s)) {
    std::string what;
    switch (*failure) {
      case ResolveFailure::UnknownPath: what = "model path '" + s.model_path + "' is not in the archive"; break;
      case ResolveFailure::UnknownType: what = "unknown agent type '" + s.agent_type + "'"; break;
      case ResolveFailure::TypeMismatch:
        what = "model path '" + s.model_path + "' is not listed under " + s.agent_type;
        break;
      case ResolveFailure::UnknownCharacter: what = "unknown character '" + s.character + "'"; break;
    }
    throw ResolveError(*failure, what);
  }
  ResolvedAgent r;
  r.agent_type = s.agent_type;
  r.model_path = s.model_path;
  r.checkpoint = fs::absolute(checkpoint_file(s.model_path));
  r.character = *roster.find(s.character);
  r.character_name = roster.at(r.character).name;
  r.difficulty_score = manifest_.find_model(s.model_path)->model_difficulty_score;
  return r;
}

std::vector<std::string> AgentArchive::lint(const env::Roster& roster) const {
  std::vector<std::string> problems;
  for (const auto& [type, entry] : manifest_.types()) {
    if (!is_agent_type(type)) problems.push_back("unknown agent type '" + type + "'");
    for (const auto& c : entry.suggested_characters)
      if (!roster.find(c)) problems.push_back(type + ": suggested character '" + c + "' is not in the roster");
    for (const auto& m : entry.agent_models) {
      if (!parse_difficulty(m.model_difficulty_score))
        problems.push_back(m.model_path + ": malformed difficulty '" + m.model_difficulty_score + "'");
      std::string reason;
      if (!policy::is_loadable_checkpoint(checkpoint_file(m.model_path), &reason))
        problems.push_back(m.model_path + ": " + reason);
      const auto rec = std::find_if(records_.begin(), records_.end(),
                                    [&](const AgentRecord& r) { return r.model_path == m.model_path; });
      if (rec == records_.end())
        problems.push_back(m.model_path + ": no record with an evaluation summary");
      else if (rec->agent_type != type || rec->difficulty_score != m.model_difficulty_score)
        problems.push_back(m.model_path + ": record disagrees with the manifest");
    }
  }
  for (const auto& r : records_)
    if (!manifest_.find_model(r.model_path)) problems.push_back(r.model_path + ": record without manifest entry");
  return problems;
}

}  // namespace tta::archive
