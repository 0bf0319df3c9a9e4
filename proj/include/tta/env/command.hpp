#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tta/env/config.hpp"
#include "tta/env/roster.hpp"

namespace tta::env {

struct CommandEntry {
  std::int64_t frame = 0;
  std::uint8_t direction = 5;  // facing-relative numpad code
  std::uint8_t pressed = 0;    // attack buttons with a rising edge this frame
  bool operator==(const CommandEntry&) const = default;
};

/// Fixed-capacity ring of recent input changes. An entry is recorded on a
/// frame where the direction changed or an attack button was newly pressed.
class CommandBuffer {
 public:
  explicit CommandBuffer(int capacity = config::kCommandBufferCapacity);

  /// Entries must arrive with strictly increasing frame indices; an entry for
  /// a frame not after the newest one throws std::invalid_argument.
  void push(const CommandEntry& entry);

  /// Records the per-frame controller sample, skipping unchanged frames.
  void record(std::int64_t frame, int direction, std::uint8_t pressed);

  int size() const { return count_; }
  int capacity() const { return static_cast<int>(ring_.size()); }
  bool empty() const { return count_ == 0; }
  /// i = 0 is the oldest retained entry.
  const CommandEntry& operator[](int i) const;
  const CommandEntry& newest() const { return (*this)[count_ - 1]; }
  int last_direction() const { return empty() ? 5 : newest().direction; }
  std::vector<CommandEntry> entries() const;
  void clear();

  bool operator==(const CommandBuffer& other) const { return entries() == other.entries(); }

 private:
  std::vector<CommandEntry> ring_;
  int head_ = 0;  // slot of the oldest entry
  int count_ = 0;
};

/// Returns the index (into spec.specials) of the first special move whose
/// motion appears in order within the motion window ending at current_frame,
/// completed by its trigger button newly pressed at current_frame. Charge
/// moves additionally need charge_counter >= charge_frames.
std::optional<int> detect_special(const CommandBuffer& buffer, const CharacterSpec& spec,
                                  std::int64_t current_frame, int charge_counter = 0,
                                  int window = config::kMotionWindow);

}  // namespace tta::env
