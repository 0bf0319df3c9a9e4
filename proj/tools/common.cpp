#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "tta/eval/net_controller.hpp"
#include "tta/policy/checkpoint.hpp"
#include "tta/util/files.hpp"

namespace tta::cli {

std::shared_ptr<eval::Controller> make_controller(const std::string& spec,
                                                  std::shared_ptr<const env::Roster> roster, bool deterministic) {
  if (spec == "noop") return std::make_shared<eval::NoopController>();
  if (spec == "random") return std::make_shared<eval::RandomController>();
  if (spec == "builtin") return std::make_shared<eval::BuiltinAiController>(roster);
  if (spec == "macro") return std::make_shared<eval::MacroController>(roster);
  const std::filesystem::path path(spec);
  std::string reason;
  if (!policy::is_loadable_checkpoint(path, &reason))
    throw std::runtime_error("'" + spec + "' is neither a built-in controller nor a loadable checkpoint: " + reason);
  return std::make_shared<eval::NetController>(policy::load_checkpoint(path), path.stem().string(), deterministic);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << '\n';
    return;
  }
  util::write_file_atomic(path, text + "\n");
  std::cerr << "wrote " << path << '\n';
}

}  // namespace tta::cli
