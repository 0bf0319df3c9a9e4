#include "tta/env/render.hpp"

#include <cstdlib>

namespace tta::env {

namespace {

using namespace config;

constexpr int kN = Image::kSize;
constexpr std::int64_t kW = kArenaWidth;
constexpr std::int64_t kH = kArenaHeight;
constexpr int kHpBarUnits = 180;
constexpr int kHpBarRows[] = {1, 2, 3};
constexpr int kTimerRows[] = {5, 6};

// Pixel centres in arena units, scaled by 2*kN to stay integral:
// column c sits at (2c+1)*kW/(2kN), row r at height (2(kN-1-r)+1)*kH/(2kN).
constexpr std::int64_t col_centre(int c) { return (2 * c + 1) * kW; }
constexpr std::int64_t row_centre(int r) { return (2 * (kN - 1 - r) + 1) * kH; }
constexpr std::int64_t scaled(std::int64_t units) { return 2 * kN * units; }

void fill_box(Image& img, int channel, int x, int half_width, int y0, int y1,
              std::uint8_t level) {
  for (int r = 0; r < kN; ++r) {
    const auto ry = row_centre(r);
    if (ry < scaled(y0) || ry > scaled(y1)) continue;
    for (int c = 0; c < kN; ++c) {
      if (std::abs(col_centre(c) - scaled(x)) <= scaled(half_width)) img.at(channel, r, c) = level;
    }
  }
}

}  // namespace

Image Image::mirrored() const {
  Image out;
  for (int ch = 0; ch < kChannels; ++ch) {
    const int src = ch == 0 ? 1 : ch == 1 ? 0 : ch;
    for (int r = 0; r < kSize; ++r)
      for (int c = 0; c < kSize; ++c) out.at(ch, r, c) = at(src, r, kSize - 1 - c);
  }
  return out;
}

Image render(const Roster& roster, const GameState& state) {
  Image img;
  for (int i = 0; i < 2; ++i) {
    const FighterState& f = state.fighters[i];
    const int height = f.status == Status::Crouching ? kCrouchHeight : kStandHeight;
    fill_box(img, i, f.x, kBodyHalfWidth, f.y, f.y + height, kBodyLevel);

    const std::int64_t max_hp = roster.at(f.character_id).max_hp;
    const std::int64_t bar = scaled(kHpBarUnits) * f.hp;  // compared against centre * max_hp
    for (int r : kHpBarRows) {
      for (int c = 0; c < kN; ++c) {
        const std::int64_t centre = col_centre(c) * max_hp;
        const bool lit = i == 0 ? centre <= bar : centre >= scaled(kW) * max_hp - bar;
        if (lit && f.hp > 0) img.at(i, r, c) = kHpBarLevel;
      }
    }
  }

  for (const auto& p : state.projectiles) {
    if (!p.active) continue;
    fill_box(img, 2, p.x, kProjectileHalfWidth, p.y - kProjectileHalfWidth,
             p.y + kProjectileHalfWidth, kProjectileLevel);
  }

  const std::int64_t half_span = scaled(kW / 4) * state.round_frames_left;
  for (int r : kTimerRows) {
    for (int c = 0; c < kN; ++c) {
      if (state.round_frames_left > 0 &&
          std::abs(col_centre(c) - scaled(kW / 2)) * kRoundFrames <= half_span) {
        img.at(0, r, c) = kTimerLevel;
        img.at(1, r, c) = kTimerLevel;
      }
    }
  }
  return img;
}

}  // namespace tta::env
