#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tta/env/command.hpp"
#include "tta/env/roster.hpp"

namespace tta::testing {

struct SpecialCase {
  std::string label;
  std::string character;
  std::vector<env::CommandEntry> entries;  // frames relative to t = 100
  int charge_counter = 0;
  std::optional<std::string> expected;     // special move name, or none
};

inline constexpr std::int64_t kCaseFrame = 100;

inline std::uint8_t bit(env::Button b) {
  return static_cast<std::uint8_t>(1u << (static_cast<int>(b) - static_cast<int>(env::Button::LP)));
}

inline env::CommandEntry at(int offset, int dir, std::uint8_t pressed = 0) {
  return {kCaseFrame + offset, static_cast<std::uint8_t>(dir), pressed};
}

/// Hand-built command sequences with their expected classification.
inline std::vector<SpecialCase> special_case_table() {
  using env::Button;
  const auto lp = bit(Button::LP), hp = bit(Button::HP), lk = bit(Button::LK);
  return {
      {"qcf punch inside window", "Ryu", {at(-8, 2), at(-5, 3), at(-3, 6), at(0, 6, lp)}, 0,
       "hadouken"},
      {"qcf spread over 40 frames", "Ryu", {at(-40, 2), at(-25, 3), at(-15, 6), at(0, 6, lp)}, 0,
       std::nullopt},
      {"qcf with held punch", "Ryu", {at(-12, 5, lp), at(-8, 2), at(-5, 3), at(0, 6)}, 0,
       std::nullopt},
      {"qcf motion out of order", "Ryu", {at(-8, 3), at(-5, 2), at(0, 6, lp)}, 0, std::nullopt},
      {"qcf with kick", "Ryu", {at(-8, 2), at(-5, 3), at(0, 6, lk)}, 0, std::nullopt},
      {"qcb kick", "Ryu", {at(-8, 2), at(-5, 1), at(0, 4, lk)}, 0, "tatsumaki"},
      {"qcf with stray inputs", "Ryu",
       {at(-14, 1), at(-11, 2), at(-9, 8), at(-7, 3), at(-4, 5), at(0, 6, lp)}, 0, "hadouken"},
      {"motion starts on window edge", "Ryu", {at(-20, 2), at(-10, 3), at(0, 6, lp)}, 0,
       std::nullopt},
      {"dragon punch beats qcf overlap", "Ken", {at(-10, 6), at(-6, 2), at(-3, 3), at(0, 6, hp)}, 0,
       "shoryuken"},
      {"charge at threshold", "EHonda", {at(-50, 4), at(0, 6, lp)}, 45, "sumo_headbutt"},
      {"charge below threshold", "EHonda", {at(-44, 4), at(0, 6, lp)}, 44, std::nullopt},
      {"half-circle grab", "Zangief", {at(-9, 4), at(-6, 2), at(0, 6, lp)}, 0,
       "spinning_piledriver"},
  };
}

/// Runs one case against detect_special; returns the detected name or none.
inline std::optional<std::string> classify(const env::Roster& roster, const SpecialCase& c) {
  const auto id = roster.find(c.character);
  const auto& spec = roster.at(id.value());
  env::CommandBuffer buf;
  for (const auto& e : c.entries) buf.push(e);
  const auto m = env::detect_special(buf, spec, kCaseFrame, c.charge_counter);
  if (!m) return std::nullopt;
  return spec.specials[static_cast<std::size_t>(*m)].name;
}

}  // namespace tta::testing
