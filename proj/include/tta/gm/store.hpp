#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

struct sqlite3;

namespace tta::gm {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StoredSession {
  std::string id;
  std::string character;
  std::string phase;
  nlohmann::json playing_data;
  std::int64_t created_at_ms = 0;
};

struct StoredMatch {
  std::string session_id;
  int seq = 0;
  nlohmann::json summary;
  nlohmann::json replay;  // null when the match has no full replay
};

/// Sessions and match records in one SQLite file. Calls are serialized.
class Store {
 public:
  static constexpr int kSchemaVersion = 1;

  /// Opens or creates `<dir>/tta.sqlite3`; ":memory:" keeps everything in RAM.
  explicit Store(const std::filesystem::path& file);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  int schema_version() const;
  void put_session(const StoredSession& s);
  std::optional<StoredSession> session(const std::string& id) const;
  std::vector<std::string> session_ids() const;
  void add_match(const StoredMatch& m);
  /// Updates the stored summary of an existing match (feedback arrives later).
  void update_match_summary(const std::string& session_id, int seq, const nlohmann::json& summary);
  std::vector<StoredMatch> matches(const std::string& session_id) const;

 private:
  void exec(const char* sql) const;

  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

}  // namespace tta::gm
