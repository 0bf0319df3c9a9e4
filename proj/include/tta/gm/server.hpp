#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "tta/gm/game_manager.hpp"

namespace tta::gm {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  double tick_hz = 15.0;
  std::chrono::milliseconds disconnect_grace{5000};
  int worker_threads = 4;  // for blocking handlers and live matches
};

/// HTTP and WebSocket front end of a GameManager.
///
///   POST /session {character}               -> {session_id}
///   GET  /session/{id}/playing-data         -> playing data
///   POST /session/{id}/next-opponent {mode} -> selection
///   POST /session/{id}/feedback {text}      -> playing data
///   GET  /archive                           -> archive manifest
///   WS   /session/{id}/stream               -> live match on the pending selection
class Server {
 public:
  Server(GameManager& gm, ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  void start();
  void stop();
  unsigned short port() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace tta::gm
