#include "tta/eval/controller.hpp"

#include "tta/train/builtin_ai.hpp"

namespace tta::eval {

std::vector<env::ButtonVector> NoopController::act(std::span<const ControlContext> batch) {
  return std::vector<env::ButtonVector>(batch.size());
}

std::vector<env::ButtonVector> RandomController::act(std::span<const ControlContext> batch) {
  std::vector<env::ButtonVector> out;
  out.reserve(batch.size());
  for (const auto& c : batch) {
    std::uniform_int_distribution<int> mask(0, 0x0FFF);
    out.push_back(env::ButtonVector::from_mask(static_cast<std::uint16_t>(mask(*c.rng))));
  }
  return out;
}

std::vector<env::ButtonVector> BuiltinAiController::act(std::span<const ControlContext> batch) {
  std::vector<env::ButtonVector> out;
  out.reserve(batch.size());
  for (const auto& c : batch) out.push_back(train::builtin_ai_policy(*roster_, *c.state, c.side));
  return out;
}

std::vector<env::ButtonVector> MacroController::act(std::span<const ControlContext> batch) {
  std::vector<env::ButtonVector> out;
  out.reserve(batch.size());
  for (const auto& c : batch) {
    const auto& self = c.state->fighter(c.side);
    const auto& spec = roster_->at(self.character_id);
    const auto step = c.state->frame_count / env::config::kFrameSkip;
    env::ButtonVector b;
    if (!spec.specials.empty()) {
      const auto& m = spec.specials.front();
      std::vector<int> dirs;
      if (m.charge_frames > 0)
        dirs.assign(static_cast<std::size_t>(m.charge_frames / env::config::kFrameSkip + 2), 4);
      dirs.insert(dirs.end(), m.motion.begin(), m.motion.end());
      const auto k = step - start_step_;
      if (k >= 0 && k < static_cast<std::int64_t>(dirs.size())) {
        b = env::buttons_for_direction(dirs[static_cast<std::size_t>(k)], self.facing);
        if (k + 1 == static_cast<std::int64_t>(dirs.size()))
          b.set(m.trigger == env::TriggerClass::Punch ? env::Button::LP : env::Button::LK);
      }
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace tta::eval
