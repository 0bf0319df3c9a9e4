#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/replay.hpp"
#include "tta/eval/controller.hpp"

namespace tta::eval {

struct SideStats {
  int special_moves = 0;
  int regular_attacks = 0;
  int projectiles_fired = 0;
  int jumps = 0;
  int damage_dealt = 0;
  int steps_in_air = 0;
  bool operator==(const SideStats&) const = default;
};

/// Per-round statistics, derived only from the StepInfo stream.
struct MatchStats {
  env::Winner winner = env::Winner::None;
  std::array<SideStats, 2> sides{};
  std::int64_t distance_units = 0;  // sum over steps of |x1 - x2|
  int steps = 0;
  int frames = 0;

  double mean_distance() const;
  bool won_by(env::Side s) const;
  bool operator==(const MatchStats&) const = default;
};

class StatsAccumulator {
 public:
  void add(const std::array<env::StepInfo, 2>& info, int frames);
  MatchStats finish(env::Winner winner) const;

 private:
  MatchStats stats_;
};

nlohmann::json stats_to_json(const MatchStats& s);

struct MatchSetup {
  int left_character = 0;
  int right_character = 0;
  std::uint64_t seed = 0;  // per-side sampling streams derive from it
};

struct MatchRecord {
  MatchSetup setup;
  MatchStats stats;
  env::Replay replay;
};

/// Plays full rounds with `left` and `right` controlling the two sides.
/// Matches advance in lockstep, `parallel` at a time, so network
/// controllers evaluate one batch per decision step.
std::vector<MatchRecord> run_matches(std::shared_ptr<const env::Roster> roster, Controller& left,
                                     Controller& right, const std::vector<MatchSetup>& setups,
                                     int parallel = 16);

/// Re-simulates a stored replay and recomputes its statistics.
MatchStats stats_from_replay(const env::Roster& roster, const env::Replay& replay);

}  // namespace tta::eval
