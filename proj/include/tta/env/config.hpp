#pragma once

#include <cstdint>

// Fixed combat and arena constants for the built-in fighting game. Everything
// the simulation does is integer arithmetic over these units.
namespace tta::env::config {

inline constexpr int kArenaWidth = 400;
inline constexpr int kArenaHeight = 200;
inline constexpr int kMaxHp = 176;
inline constexpr int kFramesPerSecond = 60;
inline constexpr int kRoundSeconds = 99;
inline constexpr int kRoundFrames = kRoundSeconds * kFramesPerSecond;  // 5940
inline constexpr int kFrameSkip = 4;

inline constexpr int kMotionWindow = 20;
inline constexpr int kChargeFrames = 45;
inline constexpr int kChargeCap = 120;
inline constexpr int kChargeDecay = 8;
inline constexpr int kCommandBufferCapacity = 32;

inline constexpr int kBodyHalfWidth = 20;
inline constexpr int kMinSeparation = 2 * kBodyHalfWidth;
inline constexpr int kStandHeight = 80;
inline constexpr int kCrouchHeight = 50;
inline constexpr int kSpawnOffset = 70;  // from arena centre
inline constexpr int kGravity = 1;

inline constexpr int kMaxProjectilesPerSide = 1;
inline constexpr int kProjectileHalfWidth = 8;
inline constexpr int kProjectileHeight = 40;
inline constexpr int kProjectileMaxHitY = 55;  // fighters above this clear projectiles

inline constexpr int kDefaultVerticalReach = 70;
inline constexpr int kHitstunFrames = 14;
inline constexpr int kStunFrames = 40;
inline constexpr int kBlockstunFrames = 10;
inline constexpr int kKnockbackSpeed = 3;
inline constexpr int kChipDivisor = 4;

inline constexpr int kHistoryLength = 100;
inline constexpr int kImageSize = 84;
inline constexpr int kImageChannels = 3;

}  // namespace tta::env::config
