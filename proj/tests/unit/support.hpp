#pragma once

#include <filesystem>
#include <string>

#include "tta/archive/archive.hpp"
#include "tta/env/observation.hpp"
#include "tta/policy/policy_net.hpp"

namespace tta::test_support {

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("tta_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline policy::PolicySpec tiny_spec() {
  policy::PolicySpec s;
  s.cnn_channels = {4, 8, 8};
  s.cnn_feature_dim = 16;
  s.rnn_hidden_dim = 8;
  s.rnn_layers = 1;
  s.rnn_dropout = 0.0;
  s.scalar_dim = env::scalar_dim(env::default_roster().size());
  s.actor_layers = {16};
  s.critic_layers = {16};
  return s;
}

inline std::filesystem::path tiny_checkpoint(const std::filesystem::path& dir, const std::string& stem,
                                             const std::string& profile, std::uint64_t seed = 3) {
  auto net = policy::make_policy(tiny_spec(), seed);
  const auto path = dir / (stem + ".ckpt");
  policy::save_checkpoint(net, path, {{"profile", profile}, {"iteration", 1}});
  return path;
}

/// An archive at `dir/archive` holding one tiny agent per listed type.
inline std::shared_ptr<archive::AgentArchive> tiny_archive(const std::filesystem::path& dir,
                                                           const std::vector<std::string>& types) {
  auto a = std::make_shared<archive::AgentArchive>(dir / "archive");
  int i = 0;
  for (const auto& t : types) {
    const auto ckpt = tiny_checkpoint(dir, std::to_string(++i) + "_0.5", archive::default_profile_for(t), 10 + i);
    a->register_agent(ckpt, t, {0.5, 20, 1.0});
  }
  return a;
}

}  // namespace tta::test_support
