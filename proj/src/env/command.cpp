#include "tta/env/command.hpp"

#include <stdexcept>

namespace tta::env {

CommandBuffer::CommandBuffer(int capacity) : ring_(static_cast<std::size_t>(capacity)) {
  if (capacity < config::kMotionWindow)
    throw std::invalid_argument("command buffer capacity must cover the motion window");
}

void CommandBuffer::push(const CommandEntry& entry) {
  if (count_ > 0 && entry.frame <= newest().frame)
    throw std::invalid_argument("command entries must have strictly increasing frames");
  const int cap = capacity();
  if (count_ < cap) {
    ring_[(head_ + count_) % cap] = entry;
    ++count_;
  } else {
    ring_[head_] = entry;
    head_ = (head_ + 1) % cap;
  }
}

void CommandBuffer::record(std::int64_t frame, int direction, std::uint8_t pressed) {
  if (pressed == 0 && direction == last_direction() && !empty()) return;
  if (pressed == 0 && empty() && direction == 5) return;
  push({frame, static_cast<std::uint8_t>(direction), pressed});
}

const CommandEntry& CommandBuffer::operator[](int i) const {
  return ring_[(head_ + i) % capacity()];
}

std::vector<CommandEntry> CommandBuffer::entries() const {
  std::vector<CommandEntry> out;
  out.reserve(count_);
  for (int i = 0; i < count_; ++i) out.push_back((*this)[i]);
  return out;
}

void CommandBuffer::clear() {
  head_ = 0;
  count_ = 0;
}

std::optional<int> detect_special(const CommandBuffer& buffer, const CharacterSpec& spec,
                                  std::int64_t current_frame, int charge_counter, int window) {
  if (buffer.empty()) return std::nullopt;
  const CommandEntry& last = buffer.newest();
  if (last.frame != current_frame || last.pressed == 0) return std::nullopt;

  // First entry inside the window.
  int first = buffer.size() - 1;
  while (first > 0 && buffer[first - 1].frame > current_frame - window) --first;

  for (std::size_t m = 0; m < spec.specials.size(); ++m) {
    const SpecialMove& move = spec.specials[m];
    const std::uint8_t trigger_bits =
        move.trigger == TriggerClass::Punch ? kPunchBits : kKickBits;
    if ((last.pressed & trigger_bits) == 0) continue;
    if (move.charge_frames > 0 && charge_counter < move.charge_frames) continue;

    std::size_t matched = 0;
    for (int i = first; i < buffer.size() && matched < move.motion.size(); ++i) {
      if (buffer[i].direction == move.motion[matched]) ++matched;
    }
    if (matched == move.motion.size()) return static_cast<int>(m);
  }
  return std::nullopt;
}

}  // namespace tta::env
