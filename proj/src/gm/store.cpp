#include "tta/gm/store.hpp"

#include <sqlite3.h>

namespace tta::gm {

namespace {

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
      throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, const std::string& v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw StoreError(std::string("step failed: ") + sqlite3_errmsg(db_));
  }
  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p), sqlite3_column_bytes(stmt_, col)) : std::string();
  }
  std::int64_t int64(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  void check(int rc) const {
    if (rc != SQLITE_OK) throw StoreError(std::string("bind failed: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

Store::Store(const std::filesystem::path& file) {
  if (file != ":memory:" && file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  if (sqlite3_open(file.c_str(), &db_) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw StoreError("cannot open " + file.string() + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  exec("CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT NOT NULL)");
  exec(
      "CREATE TABLE IF NOT EXISTS sessions (id TEXT PRIMARY KEY, character TEXT NOT NULL, "
      "phase TEXT NOT NULL, playing_data TEXT NOT NULL, created_at_ms INTEGER NOT NULL)");
  exec(
      "CREATE TABLE IF NOT EXISTS matches (session_id TEXT NOT NULL, seq INTEGER NOT NULL, "
      "summary TEXT NOT NULL, replay TEXT, PRIMARY KEY (session_id, seq))");
  Statement get(db_, "SELECT value FROM meta WHERE key = 'schema_version'");
  if (get.step()) {
    if (std::stoi(get.text(0)) != kSchemaVersion)
      throw StoreError("store schema version " + get.text(0) + " is not supported");
  } else {
    Statement put(db_, "INSERT INTO meta (key, value) VALUES ('schema_version', ?)");
    put.bind(1, std::to_string(kSchemaVersion)).step();
  }
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const char* sql) const {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw StoreError(msg);
  }
}

int Store::schema_version() const {
  std::lock_guard lock(mu_);
  Statement s(db_, "SELECT value FROM meta WHERE key = 'schema_version'");
  return s.step() ? std::stoi(s.text(0)) : 0;
}

void Store::put_session(const StoredSession& s) {
  std::lock_guard lock(mu_);
  Statement st(db_,
               "INSERT INTO sessions (id, character, phase, playing_data, created_at_ms) VALUES (?, ?, ?, ?, ?) "
               "ON CONFLICT(id) DO UPDATE SET character = excluded.character, phase = excluded.phase, "
               "playing_data = excluded.playing_data");
  st.bind(1, s.id).bind(2, s.character).bind(3, s.phase).bind(4, s.playing_data.dump()).bind(5, s.created_at_ms);
  st.step();
}

std::optional<StoredSession> Store::session(const std::string& id) const {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT id, character, phase, playing_data, created_at_ms FROM sessions WHERE id = ?");
  st.bind(1, id);
  if (!st.step()) return std::nullopt;
  return StoredSession{st.text(0), st.text(1), st.text(2), nlohmann::json::parse(st.text(3)), st.int64(4)};
}

std::vector<std::string> Store::session_ids() const {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT id FROM sessions ORDER BY created_at_ms, id");
  std::vector<std::string> ids;
  while (st.step()) ids.push_back(st.text(0));
  return ids;
}

void Store::add_match(const StoredMatch& m) {
  std::lock_guard lock(mu_);
  Statement st(db_, "INSERT INTO matches (session_id, seq, summary, replay) VALUES (?, ?, ?, ?)");
  st.bind(1, m.session_id).bind(2, m.seq).bind(3, m.summary.dump()).bind(4, m.replay.dump());
  st.step();
}

void Store::update_match_summary(const std::string& session_id, int seq, const nlohmann::json& summary) {
  std::lock_guard lock(mu_);
  Statement st(db_, "UPDATE matches SET summary = ? WHERE session_id = ? AND seq = ?");
  st.bind(1, summary.dump()).bind(2, session_id).bind(3, static_cast<std::int64_t>(seq));
  st.step();
  if (sqlite3_changes(db_) != 1) throw StoreError("no match " + std::to_string(seq) + " in session " + session_id);
}

std::vector<StoredMatch> Store::matches(const std::string& session_id) const {
  std::lock_guard lock(mu_);
  Statement st(db_, "SELECT seq, summary, replay FROM matches WHERE session_id = ? ORDER BY seq");
  st.bind(1, session_id);
  std::vector<StoredMatch> out;
  while (st.step())
    out.push_back({session_id, static_cast<int>(st.int64(0)), nlohmann::json::parse(st.text(1)),
                   nlohmann::json::parse(st.text(2))});
  return out;
}

}  // namespace tta::gm
