#include "commands.hpp"

#include <iostream>

#include "tta/train/trainer.hpp"

namespace tta::cli {

void add_train_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("train", "Train an agent with hybrid PPO self-play");
  auto cfg = std::make_shared<train::TrainConfig>();
  auto spi = std::make_shared<std::int64_t>(cfg->schedule.steps_per_iteration);
  auto no_history = std::make_shared<bool>(false);
  auto quiet = std::make_shared<bool>(false);
  cmd->add_option("--profile", cfg->profile, "Reward profile name or JSON file")->capture_default_str();
  cmd->add_option("--iterations", cfg->iterations, "Training iterations")->capture_default_str();
  cmd->add_option("--seed", cfg->seed, "Base seed")->capture_default_str();
  cmd->add_option("--out", cfg->out_dir, "Run directory")->required();
  cmd->add_option("--steps-per-iteration", *spi, "Environment steps per iteration")->capture_default_str();
  cmd->add_option("--num-envs", cfg->schedule.num_envs, "Parallel environments")->capture_default_str();
  cmd->add_option("--n-steps", cfg->ppo.n_steps, "Rollout length per environment")->capture_default_str();
  cmd->add_option("--batch-size", cfg->ppo.batch_size, "PPO minibatch size")->capture_default_str();
  cmd->add_option("--epochs", cfg->ppo.epochs_per_update, "PPO epochs per update")->capture_default_str();
  cmd->add_option("--discount", cfg->ppo.discount_gamma, "Return discount")->capture_default_str();
  cmd->add_option("--clip-range", cfg->ppo.clip_range, "PPO clip range")->capture_default_str();
  cmd->add_option("--eval-matches", cfg->eval_matches, "Matches vs the built-in AI per iteration")
      ->capture_default_str();
  cmd->add_flag("--no-history", *no_history, "Ablate the action-history LSTM (baseline variant)");
  cmd->add_flag("--quiet", *quiet, "Only print iteration summaries");
  cmd->callback([cfg, spi, no_history, quiet] {
    cfg->schedule.steps_per_iteration = *spi;
    cfg->spec.use_history = !*no_history;
    cfg->on_progress = [quiet = *quiet](const nlohmann::json& e) {
      if (e.contains("completed")) {
        const auto& r = e["completed"];
        std::cout << "iteration " << r["iteration"] << " timesteps " << r["timesteps"] << " eval "
                  << r["eval"].dump() << " seconds " << r["seconds"] << std::endl;
      } else if (!quiet) {
        std::cout << "  rollout " << e["rollout"] << "/" << e["of"] << " " << e["update"].dump()
                  << std::endl;
      }
    };
    const auto pool = train::train(*cfg);
    std::cout << "pool size " << pool.size() << ", manifest " << (cfg->out_dir / "manifest.json").string()
              << std::endl;
  });
}

}  // namespace tta::cli
