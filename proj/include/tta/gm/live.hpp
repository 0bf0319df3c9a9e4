#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/eval/controller.hpp"

namespace tta::gm {

/// {type:"state", frame, fighters, projectiles, timer, hp}.
nlohmann::json state_frame(const env::GameState& state, const env::Roster& roster);

/// Player input from a network stream, paced on a fixed tick grid. Each
/// message carries the tick from which its bitmask applies; the mask holds
/// until a later message. The clock starts at the first message (or after
/// the grace period). While no stream is attached the player idles; once
/// detached for longer than the grace period the match is forfeited.
class LiveController : public eval::Controller {
 public:
  /// Receives each outgoing message; `final` marks the last one of a match.
  using FrameSink = std::function<void(const std::string& text, bool final)>;
  using Clock = std::chrono::steady_clock;

  LiveController(std::shared_ptr<const env::Roster> roster, double tick_hz,
                 std::chrono::milliseconds grace = std::chrono::milliseconds(5000));

  std::string name() const override { return "live"; }
  std::vector<env::ButtonVector> act(std::span<const eval::ControlContext> batch) override;

  /// Starts delivering frames to `sink`; returns an attachment token.
  std::uint64_t attach(FrameSink sink);
  /// Drops the attachment if it is still the current one.
  void detach(std::uint64_t token);
  void push_input(std::uint16_t mask, std::int64_t tick);
  /// Sends one message to the attached stream, if any.
  void send(const std::string& text, bool final = false);
  /// Makes the next decision step forfeit immediately.
  void cancel();

  /// Mask applied at each decision step so far.
  std::vector<std::uint16_t> applied() const;
  bool attached() const;

 private:
  std::shared_ptr<const env::Roster> roster_;
  Clock::duration period_;
  std::chrono::milliseconds grace_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  FrameSink sink_;
  std::uint64_t token_ = 0;
  bool connected_ = false;
  Clock::time_point detached_at_;
  bool got_input_ = false;
  bool cancelled_ = false;
  std::map<std::int64_t, std::uint16_t> pending_;  // tick -> mask
  std::uint16_t held_ = 0;
  std::optional<Clock::time_point> start_;
  std::int64_t step_ = 0;
  std::vector<std::uint16_t> applied_;
};

}  // namespace tta::gm
