#include <iostream>

#include "commands.hpp"
#include "tta/archive/archive.hpp"
#include "tta/eval/harness.hpp"

namespace tta::cli {

void add_archive_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("archive", "Manage the agent archive");
  cmd->require_subcommand(1);

  struct RegisterArgs {
    std::string root, checkpoint, type;
    int rounds = 40;
    std::uint64_t seed = 1;
    std::vector<std::string> characters;
  };
  auto r = std::make_shared<RegisterArgs>();
  auto* reg = cmd->add_subcommand("register", "Evaluate a checkpoint against the built-in AI and add it");
  reg->add_option("--archive", r->root, "Archive directory")->required();
  reg->add_option("--checkpoint", r->checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  reg->add_option("--type", r->type, "Agent type")->required();
  reg->add_option("--rounds", r->rounds, "Evaluation rounds against the built-in AI")->capture_default_str();
  reg->add_option("--seed", r->seed, "Evaluation seed")->capture_default_str();
  reg->add_option("--characters", r->characters, "Suggested characters (default depends on the type)");
  reg->callback([r] {
    archive::AgentArchive a(r->root);
    auto roster = std::make_shared<env::Roster>(env::default_roster());
    auto agent = make_controller(r->checkpoint, roster);
    eval::BuiltinAiController builtin(roster);
    const auto m = eval::behavior_metrics(eval::play_rounds(roster, *agent, {&builtin}, r->rounds, r->seed));
    const archive::EvalSummary summary{m.win_rate, m.rounds, m.special_moves_per_round};
    std::optional<std::vector<std::string>> chars;
    if (!r->characters.empty()) chars = r->characters;
    const auto rec = a.register_agent(r->checkpoint, r->type, summary, chars);
    std::cout << archive::record_to_json(rec).dump(2) << '\n';
  });

  auto root = std::make_shared<std::string>();
  auto* list = cmd->add_subcommand("list", "Print the archive manifest");
  list->add_option("--archive", *root, "Archive directory")->required()->check(CLI::ExistingDirectory);
  list->callback([root] { std::cout << archive::AgentArchive(*root).manifest().dump(); });

  auto lint_root = std::make_shared<std::string>();
  auto* lint = cmd->add_subcommand("lint", "Check the archive for problems");
  lint->add_option("--archive", *lint_root, "Archive directory")->required()->check(CLI::ExistingDirectory);
  lint->callback([lint_root] {
    const auto problems = archive::AgentArchive(*lint_root).lint();
    for (const auto& p : problems) std::cout << p << '\n';
    if (!problems.empty()) throw CLI::RuntimeError(static_cast<int>(std::min<std::size_t>(problems.size(), 100)));
    std::cout << "ok\n";
  });
}

}  // namespace tta::cli
