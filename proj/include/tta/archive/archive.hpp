#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/roster.hpp"

namespace tta::archive {

inline constexpr std::array<std::string_view, 8> kAgentTypes = {
    "projectile_type", "special_move_type", "defensive_type", "aggressive_type",
    "air_type",        "coward_type",       "newbie_type",    "key_spamming_type"};

bool is_agent_type(std::string_view type);

/// Reward profile a type is trained with by default.
std::string default_profile_for(std::string_view type);

/// "<score>/10-(<label>)" with score = round(10 * win rate vs the built-in AI).
struct Difficulty {
  int score = 0;
  std::string label;
  std::string text() const;
  bool operator==(const Difficulty&) const = default;
};

std::string difficulty_label(int score);
Difficulty difficulty_from_win_rate(double win_rate);
std::optional<Difficulty> parse_difficulty(std::string_view text);

struct ModelEntry {
  std::string model_path;
  std::string model_difficulty_score;
  bool operator==(const ModelEntry&) const = default;
};

struct TypeEntry {
  std::vector<std::string> suggested_characters;
  std::vector<ModelEntry> agent_models;
  bool operator==(const TypeEntry&) const = default;
};

class ArchiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The archive as the matchmaker sees it: agent type -> suggested characters
/// and models. Types keep their file order.
class ArchiveManifest {
 public:
  const std::vector<std::pair<std::string, TypeEntry>>& types() const { return types_; }
  bool empty() const;
  const TypeEntry* find_type(std::string_view type) const;
  TypeEntry& type_entry(const std::string& type);  // created on first use
  /// Type listing `model_path`, if any.
  std::optional<std::string> type_of(std::string_view model_path) const;
  const ModelEntry* find_model(std::string_view model_path) const;

  nlohmann::ordered_json to_json() const;
  static ArchiveManifest from_json(const nlohmann::ordered_json& doc);
  static ArchiveManifest parse(std::string_view text);
  std::string dump() const;

  bool operator==(const ArchiveManifest&) const = default;

 private:
  std::vector<std::pair<std::string, TypeEntry>> types_;
};

struct EvalSummary {
  double win_rate_vs_builtin = 0.0;
  int matches = 0;
  double special_moves_per_round = 0.0;
  bool operator==(const EvalSummary&) const = default;
};

nlohmann::json eval_to_json(const EvalSummary& e);
EvalSummary eval_from_json(const nlohmann::json& doc);

struct AgentRecord {
  std::string agent_type;
  std::string model_path;
  std::string difficulty_score;
  std::string profile;
  int iteration = 0;
  EvalSummary eval;
  bool operator==(const AgentRecord&) const = default;
};

nlohmann::json record_to_json(const AgentRecord& r);
AgentRecord record_from_json(const nlohmann::json& doc);

/// An opponent choice: type, model path and character name.
struct Selection {
  std::string agent_type;
  std::string model_path;
  std::string character;
  bool operator==(const Selection&) const = default;
};

enum class ResolveFailure { UnknownType, UnknownPath, TypeMismatch, UnknownCharacter };
std::string to_string(ResolveFailure f);

class ResolveError : public ArchiveError {
 public:
  ResolveError(ResolveFailure failure, const std::string& what)
      : ArchiveError(what), failure_(failure) {}
  ResolveFailure failure() const { return failure_; }

 private:
  ResolveFailure failure_;
};

struct ResolvedAgent {
  std::string agent_type;
  std::string model_path;
  std::filesystem::path checkpoint;  // absolute file
  int character = 0;
  std::string character_name;
  std::string difficulty_score;
};

/// Checks a selection against a manifest: the path must be listed under the
/// chosen type, and the character must exist in the roster (suggested
/// characters are advisory only).
std::optional<ResolveFailure> check_selection(const ArchiveManifest& manifest,
                                              const env::Roster& roster, const Selection& s);

/// On-disk archive rooted at a directory. Model paths are relative to the
/// root and name "<path>.ckpt" files; the manifest lives in archive.json and
/// the full records in records.json.
class AgentArchive {
 public:
  static constexpr std::string_view kManifestFile = "archive.json";
  static constexpr std::string_view kRecordsFile = "records.json";
  static constexpr std::string_view kModelsDir = "agent_models/agents_archive";

  /// Opens (or starts) an archive; an existing manifest and records are loaded.
  explicit AgentArchive(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  const ArchiveManifest& manifest() const { return manifest_; }
  const std::vector<AgentRecord>& records() const { return records_; }

  std::filesystem::path checkpoint_file(std::string_view model_path) const;

  /// Copies a loadable checkpoint under <type>/<stem> and republishes the
  /// manifest. Profile and iteration come from the checkpoint metadata.
  /// Rejects unknown types, unloadable files and duplicate model paths.
  AgentRecord register_agent(const std::filesystem::path& checkpoint, const std::string& agent_type,
                             const EvalSummary& eval,
                             std::optional<std::vector<std::string>> suggested_characters = {});

  ResolvedAgent resolve(const Selection& s, const env::Roster& roster = env::default_roster()) const;

  /// Problems found: unknown types, malformed difficulty strings, missing or
  /// unloadable checkpoints, records out of step with the manifest.
  std::vector<std::string> lint(const env::Roster& roster = env::default_roster()) const;

 private:
  void publish() const;

  std::filesystem::path root_;
  ArchiveManifest manifest_;
  std::vector<AgentRecord> records_;
};

/// Characters suggested for a type when none are given: projectile types get
/// characters with a projectile special, special-move types those with any
/// special, everyone else the whole roster.
std::vector<std::string> default_suggested_characters(std::string_view type, const env::Roster& roster);

}  // namespace tta::archive
