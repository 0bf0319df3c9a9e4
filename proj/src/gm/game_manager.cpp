#include "tta/gm/game_manager.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>


#include "tta/eval/net_controller.hpp"
#include "tta/train/schedule.hpp"
#include "tta/util/log.hpp"

namespace tta::gm {

namespace {

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << gen() << std::setw(16) << gen();
  return os.str();
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::AwaitingSelection: return "awaiting_selection";
    case Phase::InMatch: return "in_match";
    case Phase::AwaitingFeedback: return "awaiting_feedback";
    case Phase::Closed: return "closed";
  }
  return "closed";
}

Phase parse_phase(std::string_view s) {
  if (s == "awaiting_selection") return Phase::AwaitingSelection;
  if (s == "in_match") return Phase::InMatch;
  if (s == "awaiting_feedback") return Phase::AwaitingFeedback;
  if (s == "closed") return Phase::Closed;
  throw std::invalid_argument("unknown phase '" + std::string(s) + "'");
}

SelectionMode parse_selection_mode(std::string_view s) {
  if (s == "llm") return SelectionMode::Llm;
  if (s == "random") return SelectionMode::Random;
  throw GmError("bad_mode", "selection mode must be llm or random");
}

std::string to_string(SelectionSource s) {
  switch (s) {
    case SelectionSource::Llm: return "llm";
    case SelectionSource::Random: return "random";
    case SelectionSource::RandomFallback: return "random_fallback";
  }
  return "random";
}

nlohmann::ordered_json next_opponent_to_json(const NextOpponent& n) {
  auto j = llm::selection_to_json(n.selection);
  j["source"] = to_string(n.source);
  j["difficulty"] = n.difficulty;
  nlohmann::ordered_json attempts = nlohmann::ordered_json::array();
  for (const auto& a : n.attempts) {
    nlohmann::ordered_json e;
    e["attempt"] = a.index;
    e["failure"] = a.failure ? nlohmann::ordered_json(llm::to_string(*a.failure)) : nlohmann::ordered_json(nullptr);
    if (!a.detail.empty()) e["detail"] = a.detail;
    attempts.push_back(std::move(e));
  }
  j["attempts"] = std::move(attempts);
  return j;
}

GameManager::GameManager(std::shared_ptr<const archive::AgentArchive> archive, std::shared_ptr<Store> store,
                         std::shared_ptr<llm::LlmClient> llm, GameManagerOptions options,
                         std::shared_ptr<const env::Roster> roster)
    : archive_(std::move(archive)),
      store_(std::move(store)),
      llm_(std::move(llm)),
      options_(options),
      roster_(roster ? std::move(roster) : std::make_shared<env::Roster>(env::default_roster())),
      rng_(options.seed) {
  if (!archive_) throw std::invalid_argument("game manager needs an archive");
  if (options_.retry_limit < 1) throw std::invalid_argument("retry limit must be at least 1");
}

std::string GameManager::start_session(const std::string& character) {
  const auto c = roster_->find(character);
  if (!c) throw GmError("unknown_character", "unknown character '" + character + "'");
  auto s = std::make_shared<Session>();
  s->view.id = new_session_id();
  s->view.character = roster_->at(*c).name;
  s->view.playing_data = fresh_playing_data(s->view.character, *roster_);
  s->created_at_ms = now_ms();
  persist(*s);
  std::lock_guard lock(mu_);
  sessions_[s->view.id] = s;
  return s->view.id;
}

std::shared_ptr<GameManager::Session> GameManager::find(const std::string& id) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  }
  const auto stored = store_ ? store_->session(id) : std::nullopt;
  if (!stored) throw GmError("unknown_session", "no session " + id);
  // Rebuild from the stored match records so averages stay exact.
  auto s = std::make_shared<Session>();
  s->view.id = stored->id;
  s->view.character = stored->character;
  s->view.phase = parse_phase(stored->phase);
  if (s->view.phase == Phase::InMatch) s->view.phase = Phase::AwaitingSelection;  // interrupted match
  s->created_at_ms = stored->created_at_ms;
  s->view.playing_data = fresh_playing_data(s->view.character, *roster_);
  for (const auto& m : store_->matches(id)) {
    PlayedMatch pm;
    pm.seq = m.seq;
    pm.summary = summary_from_json(m.summary);
    pm.forfeit = m.replay.is_null();
    if (!m.replay.is_null()) pm.replay = env::replay_from_json(m.replay);
    s->view.playing_data = update_playing_data(std::move(s->view.playing_data), pm.summary);
    if (!pm.summary.feedback.empty()) s->view.feedback_history.push_back(pm.summary.feedback);
    s->matches.push_back(std::move(pm));
  }
  std::lock_guard lock(mu_);
  return sessions_.emplace(id, s).first->second;
}

void GameManager::persist(const Session& s) const {
  if (!store_) return;
  store_->put_session({s.view.id, s.view.character, to_string(s.view.phase),
                       nlohmann::json::parse(s.view.playing_data.to_json().dump()), s.created_at_ms});
}

SessionView GameManager::session(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->view;
}

PlayingData GameManager::playing_data(const std::string& id) const { return session(id).playing_data; }

std::vector<PlayedMatch> GameManager::matches(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->matches;
}

NextOpponent GameManager::random_selection() {
  const auto& types = manifest().types();
  std::vector<const std::pair<std::string, archive::TypeEntry>*> usable;
  for (const auto& t : types)
    if (!t.second.agent_models.empty()) usable.push_back(&t);
  if (usable.empty()) throw GmError("empty_archive", "the archive has no agents");
  std::lock_guard lock(mu_);
  const auto& [type, entry] = *usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng_)];
  const auto& model = entry.agent_models[std::uniform_int_distribution<std::size_t>(0, entry.agent_models.size() - 1)(rng_)];
  const int c = std::uniform_int_distribution<int>(0, roster_->size() - 1)(rng_);
  NextOpponent n;
  n.selection = {type, model.model_path, roster_->at(c).name};
  n.source = SelectionSource::Random;
  n.difficulty = model.model_difficulty_score;
  return n;
}

NextOpponent GameManager::request_next_opponent(const std::string& id, SelectionMode mode) {
  auto s = find(id);
  std::unique_lock lock(s->mu);
  if (s->view.phase != Phase::AwaitingSelection)
    throw GmError("wrong_phase", "session is " + to_string(s->view.phase) + ", not awaiting_selection");
  if (manifest().empty()) throw GmError("empty_archive", "the archive has no agents");
  NextOpponent out;
  if (mode == SelectionMode::Llm && llm_) {
    const auto data = s->view.playing_data;
    lock.unlock();
    const auto log = [&](const llm::Attempt& a) {
      if (a.failure)
        util::log_info("session " + id + ": selector attempt " + std::to_string(a.index) +
                       " failed: " + llm::to_string(*a.failure) + (a.detail.empty() ? "" : " (" + a.detail + ")"));
    };
    auto outcome = llm::select_opponent(data, manifest(), *llm_, options_.retry_limit, options_.icl, log, *roster_);
    lock.lock();
    if (s->view.phase != Phase::AwaitingSelection)
      throw GmError("wrong_phase", "session changed phase during selection");
    if (outcome.selection) {
      out.selection = *outcome.selection;
      out.source = SelectionSource::Llm;
      out.difficulty = manifest().find_model(out.selection.chosen_agent_model_path)->model_difficulty_score;
    } else {
      util::log_warn("session " + id + ": selector gave no valid choice in " +
                     std::to_string(outcome.attempts.size()) + " attempts, picking at random");
      out = random_selection();
      out.source = SelectionSource::RandomFallback;
    }
    out.attempts = std::move(outcome.attempts);
  } else {
    if (mode == SelectionMode::Llm) util::log_warn("session " + id + ": no selector configured, picking at random");
    out = random_selection();
    if (mode == SelectionMode::Llm) out.source = SelectionSource::RandomFallback;
  }
  s->view.pending = out;
  return out;
}

std::shared_ptr<eval::Controller> GameManager::agent_controller(const std::filesystem::path& checkpoint) {
  std::lock_guard lock(mu_);
  auto& slot = agents_[checkpoint.string()];
  if (!slot) {
    try {
      slot = std::make_shared<eval::NetController>(policy::load_checkpoint(checkpoint), checkpoint.stem().string(),
                                                   options_.deterministic_agents);
    } catch (const std::exception& e) {
      agents_.erase(checkpoint.string());
      throw GmError("unloadable_agent", "cannot load " + checkpoint.string() + ": " + e.what());
    }
  }
  return slot;
}

PlayedMatch GameManager::run_pending_match(const std::string& id, eval::Controller& player) {
  const auto view = session(id);
  if (!view.pending) throw GmError("no_selection", "no opponent has been selected");
  return run_match(id, view.pending->selection, player);
}

PlayedMatch GameManager::run_match(const std::string& id, const llm::SelectionResult& selection,
                                   eval::Controller& player) {
  auto s = find(id);
  archive::ResolvedAgent agent;
  int seq = 0;
  std::string character;
  {
    std::lock_guard lock(s->mu);
    if (s->view.phase != Phase::AwaitingSelection)
      throw GmError("wrong_phase", "session is " + to_string(s->view.phase) + ", not awaiting_selection");
    try {
      agent = archive_->resolve(llm::to_archive_selection(selection), *roster_);
    } catch (const archive::ResolveError& e) {
      throw GmError(archive::to_string(e.failure()), e.what());
    }
    seq = static_cast<int>(s->matches.size()) + 1;
    character = s->view.character;
    s->view.phase = Phase::InMatch;
  }
  const auto restore = [&] {
    std::lock_guard lock(s->mu);
    s->view.phase = Phase::AwaitingSelection;
  };
  std::shared_ptr<eval::Controller> opponent;
  try {
    opponent = agent_controller(agent.checkpoint);
  } catch (...) {
    restore();
    throw;
  }

  eval::MatchSetup setup;
  setup.left_character = *roster_->find(character);
  setup.right_character = agent.character;
  setup.seed = train::derive_seed(options_.seed, train::derive_seed(std::hash<std::string>{}(id), 0), seq);

  PlayedMatch pm;
  pm.seq = seq;
  auto& m = pm.summary;
  m.opponent = {agent.agent_type, agent.character_name, agent.model_path, agent.difficulty_score};
  m.player_character = character;
  m.started_at_ms = now_ms();
  const int player_max = roster_->at(setup.left_character).max_hp;
  const int agent_max = roster_->at(setup.right_character).max_hp;
  try {
    auto rec = eval::run_matches(roster_, player, *opponent, {setup}, 1).at(0);
    pm.stats = rec.stats;
    pm.replay = std::move(rec.replay);
    m.winner = rec.stats.won_by(env::Side::Left)    ? MatchWinner::Player
               : rec.stats.won_by(env::Side::Right) ? MatchWinner::Agent
                                                    : MatchWinner::Draw;
    const int player_hp = player_max - rec.stats.sides[1].damage_dealt;
    const int agent_hp = agent_max - rec.stats.sides[0].damage_dealt;
    m.score = m.winner == MatchWinner::Player ? match_score(m.winner, player_hp, agent_hp, player_max)
                                              : match_score(m.winner, player_hp, agent_hp, agent_max);
  } catch (const MatchForfeit& f) {
    pm.forfeit = true;
    m.winner = MatchWinner::Agent;
    m.score = match_score(m.winner, f.last_state().fighters[0].hp, f.last_state().fighters[1].hp, agent_max);
    util::log_warn("session " + id + ": match " + std::to_string(seq) + " forfeited: " + f.what());
  } catch (...) {
    restore();
    throw;
  }
  m.finished_at_ms = now_ms();
  m.player_special_moves = pm.stats.sides[0].special_moves;
  m.agent_special_moves = pm.stats.sides[1].special_moves;
  m.player_projectiles = pm.stats.sides[0].projectiles_fired;
  m.agent_projectiles = pm.stats.sides[1].projectiles_fired;
  m.mean_distance = pm.stats.steps > 0 ? pm.stats.mean_distance() : 0.0;

  std::lock_guard lock(s->mu);
  s->view.playing_data = update_playing_data(std::move(s->view.playing_data), m);
  s->view.phase = Phase::AwaitingFeedback;
  s->view.pending.reset();
  s->matches.push_back(pm);
  if (store_)
    store_->add_match({id, seq, summary_to_json(m), pm.replay ? env::replay_to_json(*pm.replay) : nlohmann::json()});
  persist(*s);
  return pm;
}

PlayingData GameManager::collect_feedback(const std::string& id, const std::string& text) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->view.phase != Phase::AwaitingFeedback)
    throw GmError("wrong_phase", "session is " + to_string(s->view.phase) + ", not awaiting_feedback");
  try {
    set_feedback(s->view.playing_data, text);
  } catch (const std::invalid_argument& e) {
    throw GmError("feedback_too_long", e.what());
  }
  auto& last = s->matches.back();
  last.summary.feedback = text;
  if (!text.empty()) s->view.feedback_history.push_back(text);
  if (store_) store_->update_match_summary(id, last.seq, summary_to_json(last.summary));
  s->view.phase = Phase::AwaitingSelection;
  persist(*s);
  return s->view.playing_data;
}

void GameManager::close_session(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->view.phase == Phase::InMatch) throw GmError("wrong_phase", "cannot close a session during a match");
  s->view.phase = Phase::Closed;
  persist(*s);
}

}  // namespace tta::gm
