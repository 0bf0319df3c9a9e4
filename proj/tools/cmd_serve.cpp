#include <csignal>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "tta/gm/server.hpp"
#include "tta/gm/store.hpp"

namespace tta::cli {

namespace {
volatile std::sig_atomic_t g_stop = 0;
}

void add_serve_command(CLI::App& app) {
  struct Args {
    std::string archive, db = "tta.sqlite3", llm_endpoint, llm_model, fixture_set, icl = "full";
    gm::ServerOptions server;
    std::uint64_t seed = 0;
    int retry_limit = 3;
    bool deterministic = false;
  };
  auto a = std::make_shared<Args>();
  a->server.port = 8080;
  auto* cmd = app.add_subcommand("serve", "Run the game manager over HTTP and WebSocket");
  cmd->add_option("--archive", a->archive, "Archive directory")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--db", a->db, "SQLite file for sessions and matches")->capture_default_str();
  cmd->add_option("--address", a->server.address, "Listen address")->capture_default_str();
  cmd->add_option("--port", a->server.port, "Listen port (0 picks one)")->capture_default_str();
  cmd->add_option("--tick-hz", a->server.tick_hz, "Live decision steps per second")->capture_default_str();
  cmd->add_option("--workers", a->server.worker_threads, "Worker threads")->capture_default_str();
  auto* ep = cmd->add_option("--llm-endpoint", a->llm_endpoint, "Chat-completions URL for the selector");
  cmd->add_option("--llm-model", a->llm_model, "Model name sent to the endpoint");
  cmd->add_option("--fixture-set", a->fixture_set, "Canned selector responses instead of an endpoint")
      ->check(CLI::ExistingDirectory)
      ->excludes(ep);
  cmd->add_option("--icl", a->icl, "In-context example: full or simplified")->capture_default_str();
  cmd->add_option("--retry-limit", a->retry_limit, "Selector attempts before a random pick")->capture_default_str();
  cmd->add_option("--seed", a->seed, "Seed for random picks and match seeds")->capture_default_str();
  cmd->add_flag("--deterministic-agents", a->deterministic, "Threshold agent actions instead of sampling");
  cmd->callback([a] {
    auto archive = std::make_shared<archive::AgentArchive>(a->archive);
    auto store = std::make_shared<gm::Store>(a->db);
    std::shared_ptr<llm::LlmClient> client;
    if (!a->fixture_set.empty()) {
      client = std::make_shared<llm::MockClient>(llm::FixtureSet::load(a->fixture_set));
    } else if (!a->llm_endpoint.empty()) {
      auto cfg = llm::LlmClientConfig::from_environment();
      cfg.endpoint = a->llm_endpoint;
      if (!a->llm_model.empty()) cfg.model = a->llm_model;
      client = std::make_shared<llm::HttpClient>(cfg);
    }
    gm::GameManagerOptions o;
    o.seed = a->seed;
    o.retry_limit = a->retry_limit;
    o.icl = llm::parse_icl_variant(a->icl);
    o.deterministic_agents = a->deterministic;
    gm::GameManager manager(archive, store, client, o);
    gm::Server server(manager, a->server);
    server.start();
    std::cout << "listening on " << a->server.address << ":" << server.port() << std::endl;
    std::signal(SIGINT, [](int) { g_stop = 1; });
    std::signal(SIGTERM, [](int) { g_stop = 1; });
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    server.stop();
  });
}

}  // namespace tta::cli
