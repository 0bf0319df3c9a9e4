#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace tta::env {

enum class Button : std::uint8_t { Up, Down, Left, Right, LP, MP, HP, LK, MK, HK, Start, Select };

inline constexpr int kNumButtons = 12;

inline constexpr std::array<std::string_view, kNumButtons> kButtonNames = {
    "UP", "DOWN", "LEFT", "RIGHT", "LP", "MP", "HP", "LK", "MK", "HK", "START", "SELECT"};

enum class Side : std::uint8_t { Left = 0, Right = 1 };

constexpr Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
constexpr int index(Side s) { return static_cast<int>(s); }
constexpr std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// The 12-slot multi-binary controller state, in the fixed slot order of
/// `Button`. Bit i of the mask form is slot i.
class ButtonVector {
 public:
  constexpr ButtonVector() = default;

  static constexpr ButtonVector from_mask(std::uint16_t mask) {
    ButtonVector v;
    v.mask_ = mask & kAllMask;
    return v;
  }

  template <typename Range>
  static ButtonVector from_bools(const Range& r) {
    ButtonVector v;
    int i = 0;
    for (bool b : r) {
      if (i >= kNumButtons) break;
      if (b) v.mask_ |= static_cast<std::uint16_t>(1u << i);
      ++i;
    }
    return v;
  }

  constexpr bool operator[](Button b) const { return test(static_cast<int>(b)); }
  constexpr bool test(int slot) const { return (mask_ >> slot) & 1u; }
  constexpr void set(Button b, bool on = true) {
    const auto bit = static_cast<std::uint16_t>(1u << static_cast<int>(b));
    mask_ = on ? (mask_ | bit) : (mask_ & ~bit);
  }
  constexpr std::uint16_t mask() const { return mask_; }
  constexpr bool any() const { return mask_ != 0; }

  /// START and SELECT have no effect on the game.
  constexpr ButtonVector masked() const { return from_mask(mask_ & kPlayMask); }

  /// Swap LEFT and RIGHT, the input half of the side-mirror transform.
  constexpr ButtonVector mirrored() const {
    ButtonVector v = *this;
    v.set(Button::Left, (*this)[Button::Right]);
    v.set(Button::Right, (*this)[Button::Left]);
    return v;
  }

  /// Six attack buttons packed LP..HK into bits 0..5.
  constexpr std::uint8_t attack_bits() const {
    return static_cast<std::uint8_t>((mask_ >> static_cast<int>(Button::LP)) & 0x3Fu);
  }

  constexpr bool operator==(const ButtonVector&) const = default;

  static constexpr std::uint16_t kAllMask = 0x0FFF;
  static constexpr std::uint16_t kPlayMask = 0x03FF;

 private:
  std::uint16_t mask_ = 0;
};

inline constexpr std::uint8_t kPunchBits = 0b000111;
inline constexpr std::uint8_t kKickBits = 0b111000;

/// Numpad notation relative to facing: 5 neutral, 6 forward, 4 back, 2 down,
/// 3 down-forward, 1 down-back, 8 up, 9 up-forward, 7 up-back.
constexpr int relative_direction(ButtonVector b, int facing) {
  const int horizontal = (b[Button::Right] ? 1 : 0) - (b[Button::Left] ? 1 : 0);
  const int vertical = (b[Button::Up] ? 1 : 0) - (b[Button::Down] ? 1 : 0);
  const int forward = horizontal * facing;
  return 5 + forward + 3 * vertical;
}

constexpr bool is_back(int dir) { return dir == 1 || dir == 4 || dir == 7; }
constexpr bool is_down(int dir) { return dir >= 1 && dir <= 3; }
constexpr bool is_up(int dir) { return dir >= 7; }
constexpr int forward_component(int dir) { return (dir - 1) % 3 - 1; }

/// Inverse of relative_direction: absolute buttons for a facing-relative code.
constexpr ButtonVector buttons_for_direction(int dir, int facing) {
  ButtonVector b;
  const int fwd = forward_component(dir) * facing;
  if (fwd > 0) b.set(Button::Right);
  if (fwd < 0) b.set(Button::Left);
  if (is_up(dir)) b.set(Button::Up);
  if (is_down(dir)) b.set(Button::Down);
  return b;
}

}  // namespace tta::env
