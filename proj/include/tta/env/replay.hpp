#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/game.hpp"

namespace tta::env {

inline constexpr int kReplaySpecVersion = 1;

/// Initial configuration plus one (left, right) pair of 12-bit input masks per
/// decision step. Enough to re-simulate a round bit-exactly.
struct Replay {
  int left_character = 0;
  int right_character = 0;
  Side agent_side = Side::Left;
  int frame_skip = config::kFrameSkip;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> inputs;

  bool operator==(const Replay&) const = default;
};

nlohmann::json replay_to_json(const Replay& replay);
Replay replay_from_json(const nlohmann::json& doc);
void save_replay(const Replay& replay, const std::filesystem::path& path);
Replay load_replay(const std::filesystem::path& path);

/// Re-runs the recorded inputs; element i is the transition after step i.
std::vector<Transition> simulate(const Roster& roster, const Replay& replay);

}  // namespace tta::env
