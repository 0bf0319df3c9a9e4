#include "tta/gm/live.hpp"

#include <algorithm>

#include "tta/env/config.hpp"
#include "tta/gm/game_manager.hpp"

namespace tta::gm {

nlohmann::json state_frame(const env::GameState& state, const env::Roster& roster) {
  nlohmann::json fighters = nlohmann::json::array();
  for (const auto& f : state.fighters)
    fighters.push_back({{"character", roster.at(f.character_id).name},
                        {"hp", f.hp},
                        {"x", f.x},
                        {"y", f.y},
                        {"facing", f.facing},
                        {"status", std::string(env::to_string(f.status))}});
  nlohmann::json projectiles = nlohmann::json::array();
  for (const auto& p : state.projectiles)
    if (p.active) projectiles.push_back({{"owner", std::string(env::to_string(p.owner))}, {"x", p.x}, {"y", p.y}});
  return {{"type", "state"},
          {"frame", state.frame_count},
          {"fighters", std::move(fighters)},
          {"projectiles", std::move(projectiles)},
          {"timer", (state.round_frames_left + env::config::kFramesPerSecond - 1) / env::config::kFramesPerSecond},
          {"hp", {state.fighters[0].hp, state.fighters[1].hp}}};
}

LiveController::LiveController(std::shared_ptr<const env::Roster> roster, double tick_hz,
                               std::chrono::milliseconds grace)
    : roster_(std::move(roster)), grace_(grace), detached_at_(Clock::now()) {
  if (!(tick_hz > 0.0)) throw std::invalid_argument("tick rate must be positive");
  period_ = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / tick_hz));
}

std::uint64_t LiveController::attach(FrameSink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
  connected_ = true;
  cv_.notify_all();
  return ++token_;
}

void LiveController::detach(std::uint64_t token) {
  std::lock_guard lock(mu_);
  if (token != token_ || !connected_) return;
  sink_ = nullptr;
  connected_ = false;
  detached_at_ = Clock::now();
  cv_.notify_all();
}

void LiveController::push_input(std::uint16_t mask, std::int64_t tick) {
  std::lock_guard lock(mu_);
  pending_[tick] = mask;
  got_input_ = true;
  cv_.notify_all();
}

void LiveController::send(const std::string& text, bool final) {
  FrameSink sink;
  {
    std::lock_guard lock(mu_);
    sink = sink_;
  }
  if (sink) sink(text, final);
}

void LiveController::cancel() {
  std::lock_guard lock(mu_);
  cancelled_ = true;
  cv_.notify_all();
}

std::vector<std::uint16_t> LiveController::applied() const {
  std::lock_guard lock(mu_);
  return applied_;
}

bool LiveController::attached() const {
  std::lock_guard lock(mu_);
  return connected_;
}

std::vector<env::ButtonVector> LiveController::act(std::span<const eval::ControlContext> batch) {
  if (batch.size() != 1) throw std::invalid_argument("a live controller drives exactly one match");
  const auto& state = *batch[0].state;
  std::unique_lock lock(mu_);
  if (!start_) {
    cv_.wait_for(lock, grace_, [&] { return got_input_ || cancelled_; });
    start_ = Clock::now();
  }
  const auto deadline = *start_ + step_ * period_;
  const auto forfeited = [&] { return cancelled_ || (!connected_ && Clock::now() - detached_at_ > grace_); };
  while (Clock::now() < deadline && !forfeited()) {
    auto wake = deadline;
    if (!connected_) wake = std::min(wake, detached_at_ + grace_ + std::chrono::milliseconds(1));
    cv_.wait_until(lock, wake);
  }
  if (forfeited())
    throw MatchForfeit(state, cancelled_ ? "match cancelled" : "player stream detached for longer than the grace period");
  for (auto it = pending_.begin(); it != pending_.end() && it->first <= step_;) {
    held_ = it->second;
    it = pending_.erase(it);
  }
  const std::uint16_t mask = connected_ ? held_ : 0;
  applied_.push_back(mask);
  ++step_;
  auto sink = sink_;
  lock.unlock();
  if (sink) sink(state_frame(state, *roster_).dump(), false);
  return {env::ButtonVector::from_mask(mask)};
}

}  // namespace tta::gm
