#pragma once

#include <cstdint>
#include <vector>

#include "tta/env/config.hpp"
#include "tta/env/roster.hpp"
#include "tta/env/state.hpp"

namespace tta::env {

/// Channel-major 3x84x84 frame. Channel 0 carries the left fighter body and
/// its HP bar, channel 1 the right fighter and its HP bar, channel 2 only the
/// projectiles. The centred round-timer bar is drawn into channels 0 and 1. Pixels are intensity levels 0..255 that
/// the network reads as [0, 1].
struct Image {
  static constexpr int kChannels = config::kImageChannels;
  static constexpr int kSize = config::kImageSize;
  static constexpr int kPixels = kChannels * kSize * kSize;

  std::vector<std::uint8_t> data = std::vector<std::uint8_t>(kPixels, 0);

  std::uint8_t& at(int c, int row, int col) { return data[(c * kSize + row) * kSize + col]; }
  std::uint8_t at(int c, int row, int col) const { return data[(c * kSize + row) * kSize + col]; }
  float value(int c, int row, int col) const { return at(c, row, col) / 255.0f; }

  /// Horizontal flip with channels 0 and 1 exchanged.
  Image mirrored() const;

  bool operator==(const Image&) const = default;
};

inline constexpr std::uint8_t kBodyLevel = 255;
inline constexpr std::uint8_t kHpBarLevel = 160;
inline constexpr std::uint8_t kProjectileLevel = 255;
inline constexpr std::uint8_t kTimerLevel = 96;

Image render(const Roster& roster, const GameState& state);

}  // namespace tta::env
