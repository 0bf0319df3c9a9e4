#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tta/env/observation.hpp"
#include "tta/env/roster.hpp"
#include "tta/env/state.hpp"
#include "tta/policy/distribution.hpp"

namespace tta::eval {

struct ControlContext {
  const env::GameState* state = nullptr;
  env::Side side = env::Side::Left;
  const env::Observation* observation = nullptr;  // own frame; set when needs_observation()
  policy::Rng* rng = nullptr;
};

/// Anything that can drive one side of a match. Implementations are
/// stateless between calls; batching lets network controllers share a
/// forward pass across simultaneous matches.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual bool needs_observation() const { return false; }
  /// Absolute controller input for each context.
  virtual std::vector<env::ButtonVector> act(std::span<const ControlContext> batch) = 0;
};

class NoopController : public Controller {
 public:
  std::string name() const override { return "noop"; }
  std::vector<env::ButtonVector> act(std::span<const ControlContext> batch) override;
};

/// Every button pressed independently with probability 0.5.
class RandomController : public Controller {
 public:
  std::string name() const override { return "random"; }
  std::vector<env::ButtonVector> act(std::span<const ControlContext> batch) override;
};

class BuiltinAiController : public Controller {
 public:
  explicit BuiltinAiController(std::shared_ptr<const env::Roster> roster) : roster_(std::move(roster)) {}
  std::string name() const override { return "builtin"; }
  std::vector<env::ButtonVector> act(std::span<const ControlContext> batch) override;

 private:
  std::shared_ptr<const env::Roster> roster_;
};

/// Inputs the first special move of its character once, starting at decision
/// step `start_step`, and otherwise stays idle.
class MacroController : public Controller {
 public:
  MacroController(std::shared_ptr<const env::Roster> roster, int start_step = 10)
      : roster_(std::move(roster)), start_step_(start_step) {}
  std::string name() const override { return "macro"; }
  std::vector<env::ButtonVector> act(std::span<const ControlContext> batch) override;

 private:
  std::shared_ptr<const env::Roster> roster_;
  int start_step_;
};

}  // namespace tta::eval
