#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tta/archive/archive.hpp"
#include "tta/eval/match.hpp"
#include "tta/gm/playing_data.hpp"
#include "tta/gm/store.hpp"
#include "tta/llm/hyperagent.hpp"

namespace tta::gm {

enum class Phase { AwaitingSelection, InMatch, AwaitingFeedback, Closed };
std::string to_string(Phase p);
Phase parse_phase(std::string_view s);

enum class SelectionMode { Llm, Random };
SelectionMode parse_selection_mode(std::string_view s);

enum class SelectionSource { Llm, Random, RandomFallback };
std::string to_string(SelectionSource s);

/// Errors a caller can act on; `code` is a short machine-readable tag.
class GmError : public std::runtime_error {
 public:
  GmError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Thrown by a player controller that gives up (a live player gone too long).
/// Carries the last state it saw so the match can still be scored.
class MatchForfeit : public std::runtime_error {
 public:
  MatchForfeit(const env::GameState& last, const std::string& why) : std::runtime_error(why), last_(last) {}
  const env::GameState& last_state() const { return last_; }

 private:
  env::GameState last_;
};

struct NextOpponent {
  llm::SelectionResult selection;
  SelectionSource source = SelectionSource::Random;
  std::string difficulty;
  std::vector<llm::Attempt> attempts;  // llm mode only
};

nlohmann::ordered_json next_opponent_to_json(const NextOpponent& n);

struct PlayedMatch {
  int seq = 0;  // 1-based within the session
  MatchSummary summary;
  eval::MatchStats stats;
  std::optional<env::Replay> replay;  // absent after a forfeit
  bool forfeit = false;
};

struct SessionView {
  std::string id;
  std::string character;
  Phase phase = Phase::AwaitingSelection;
  PlayingData playing_data;
  std::optional<NextOpponent> pending;
  std::vector<std::string> feedback_history;
};

struct GameManagerOptions {
  std::uint64_t seed = 0;
  int retry_limit = 3;
  llm::IclVariant icl = llm::IclVariant::Full;
  bool deterministic_agents = false;
};

/// Sessions between a player and archive agents. The player always plays the
/// left side. Sessions are independent; each is guarded by its own lock, so
/// a slow selector call in one never blocks another.
class GameManager {
 public:
  GameManager(std::shared_ptr<const archive::AgentArchive> archive, std::shared_ptr<Store> store,
              std::shared_ptr<llm::LlmClient> llm, GameManagerOptions options = {},
              std::shared_ptr<const env::Roster> roster = nullptr);

  const archive::ArchiveManifest& manifest() const { return archive_->manifest(); }
  const env::Roster& roster() const { return *roster_; }

  std::string start_session(const std::string& character);
  SessionView session(const std::string& id) const;
  PlayingData playing_data(const std::string& id) const;
  std::vector<PlayedMatch> matches(const std::string& id) const;

  /// Falls back to a random pick, with a logged warning, when the selector
  /// exhausts its retries or no selector is configured.
  NextOpponent request_next_opponent(const std::string& id, SelectionMode mode);

  /// Plays one round of `player` against the selected agent.
  PlayedMatch run_match(const std::string& id, const llm::SelectionResult& selection, eval::Controller& player);
  /// Same, against the pending selection from request_next_opponent.
  PlayedMatch run_pending_match(const std::string& id, eval::Controller& player);

  /// Stores feedback (possibly empty) for the last match.
  PlayingData collect_feedback(const std::string& id, const std::string& text);
  void close_session(const std::string& id);

  NextOpponent random_selection();

 private:
  struct Session {
    mutable std::mutex mu;
    SessionView view;
    std::vector<PlayedMatch> matches;
    std::int64_t created_at_ms = 0;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  void persist(const Session& s) const;
  std::shared_ptr<eval::Controller> agent_controller(const std::filesystem::path& checkpoint);

  std::shared_ptr<const archive::AgentArchive> archive_;
  std::shared_ptr<Store> store_;
  std::shared_ptr<llm::LlmClient> llm_;
  GameManagerOptions options_;
  std::shared_ptr<const env::Roster> roster_;

  mutable std::mutex mu_;  // sessions_, rng_, agents_
  mutable std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
  std::map<std::string, std::shared_ptr<eval::Controller>> agents_;
};

}  // namespace tta::gm
