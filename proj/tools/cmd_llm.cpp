#include <iostream>

#include "commands.hpp"
#include "tta/archive/archive.hpp"
#include "tta/llm/hyperagent.hpp"
#include "tta/util/files.hpp"

namespace tta::cli {

void add_llm_bench_command(CLI::App& app) {
  struct Args {
    int n = 20;
    int parallel = 1;
    std::string fixture_set, endpoint, model, archive, archive_json, playing_data, icl = "full", out;
    bool print_prompt = false;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("llm-bench", "Query the selector repeatedly with one prompt and score the outputs");
  cmd->add_option("--n", a->n, "Queries")->capture_default_str();
  cmd->add_option("--parallel", a->parallel, "Concurrent queries")->capture_default_str();
  auto* fx = cmd->add_option("--fixture-set", a->fixture_set, "Directory of canned *.txt responses, replayed in name order")
                 ->check(CLI::ExistingDirectory);
  auto* ep = cmd->add_option("--endpoint", a->endpoint, "Chat-completions URL");
  fx->excludes(ep);
  cmd->add_option("--model", a->model, "Model name sent to the endpoint");
  auto* ar = cmd->add_option("--archive", a->archive, "Archive directory")->check(CLI::ExistingDirectory);
  cmd->add_option("--archive-json", a->archive_json, "Archive manifest file")->check(CLI::ExistingFile)->excludes(ar);
  cmd->add_option("--playing-data", a->playing_data, "Playing data JSON (default: a fresh Ryu player)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--icl", a->icl, "In-context example: full or simplified")->capture_default_str();
  cmd->add_flag("--print-prompt", a->print_prompt, "Print the prompt to stderr");
  cmd->add_option("--out", a->out, "Write the JSON report here instead of stdout");
  cmd->callback([a] {
    if (a->fixture_set.empty() && a->endpoint.empty()) throw std::invalid_argument("give --fixture-set or --endpoint");
    if (a->archive.empty() && a->archive_json.empty()) throw std::invalid_argument("give --archive or --archive-json");
    const auto manifest = a->archive.empty() ? archive::ArchiveManifest::parse(util::read_file(a->archive_json))
                                             : archive::AgentArchive(a->archive).manifest();
    const auto data = a->playing_data.empty()
                          ? gm::fresh_playing_data("Ryu", env::default_roster())
                          : gm::PlayingData::from_json(nlohmann::ordered_json::parse(util::read_file(a->playing_data)));
    const auto prompt = llm::build_prompt(data, manifest, llm::parse_icl_variant(a->icl));
    if (a->print_prompt) std::cerr << prompt << '\n';
    std::unique_ptr<llm::LlmClient> client;
    if (!a->fixture_set.empty()) {
      // Replayed in name order so a set of n fixtures is one benchmark of n runs.
      std::vector<std::string> texts;
      for (const auto& [_, t] : llm::FixtureSet::load(a->fixture_set).fixtures) texts.push_back(t);
      client = std::make_unique<llm::ScriptedClient>(std::move(texts));
    } else {
      auto cfg = llm::LlmClientConfig::from_environment();
      cfg.endpoint = a->endpoint;
      if (!a->model.empty()) cfg.model = a->model;
      client = std::make_unique<llm::HttpClient>(cfg);
    }
    emit(llm::report_to_json(llm::benchmark(*client, prompt, a->n, a->parallel)).dump(2), a->out);
  });
}

}  // namespace tta::cli
