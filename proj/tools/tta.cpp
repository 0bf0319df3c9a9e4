#include <exception>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fighting-game agents: training, archive, evaluation and matchmaking"};
  app.require_subcommand(1);
  tta::cli::add_train_command(app);
  tta::cli::add_archive_command(app);
  tta::cli::add_eval_command(app);
  tta::cli::add_llm_bench_command(app);
  tta::cli::add_serve_command(app);
  tta::cli::add_reward_command(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
