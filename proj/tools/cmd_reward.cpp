#include <iostream>

#include "commands.hpp"
#include "tta/reward/reward.hpp"

namespace tta::cli {

void add_reward_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("reward", "Inspect reward profiles");
  cmd->require_subcommand(1);
  auto profile = std::make_shared<std::string>();
  auto* show = cmd->add_subcommand("show", "Print a profile's coefficients, or list the built-in profiles");
  show->add_option("profile", *profile, "Built-in name or profile JSON file");
  show->callback([profile] {
    if (profile->empty()) {
      for (const auto& n : reward::builtin_profile_names()) std::cout << n << '\n';
      return;
    }
    std::cout << reward::terms_to_json(reward::load_profile(*profile)).dump(2) << '\n';
  });
}

}  // namespace tta::cli
