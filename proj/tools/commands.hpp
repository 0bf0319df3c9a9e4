#pragma once

#include <CLI11.hpp>
#include <memory>
#include <string>

#include "tta/eval/controller.hpp"

namespace tta::cli {

void add_train_command(CLI::App& app);
void add_archive_command(CLI::App& app);
void add_eval_command(CLI::App& app);
void add_llm_bench_command(CLI::App& app);
void add_serve_command(CLI::App& app);
void add_reward_command(CLI::App& app);

/// "noop", "random", "builtin", "macro" or a checkpoint path.
std::shared_ptr<eval::Controller> make_controller(const std::string& spec,
                                                  std::shared_ptr<const env::Roster> roster,
                                                  bool deterministic = false);

/// Writes `text` to `path`, or to stdout when the path is empty.
void emit(const std::string& text, const std::string& path);

}  // namespace tta::cli
