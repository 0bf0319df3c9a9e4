#pragma once

#include <string>

#include "tta/eval/controller.hpp"
#include "tta/policy/policy_net.hpp"

namespace tta::eval {

/// Drives a side with a policy network. Actions are sampled from the
/// per-button probabilities (or thresholded at 0.5 when deterministic) in
/// the side's own frame and converted back to absolute input.
class NetController : public Controller {
 public:
  NetController(policy::PolicyNet net, std::string name, bool deterministic = false);
  std::string name() const override { return name_; }
  bool needs_observation() const override { return true; }
  std::vector<env::ButtonVector> act(std::span<const ControlContext> batch) override;

  policy::PolicyNet& net() { return net_; }

 private:
  policy::PolicyNet net_;
  std::string name_;
  bool deterministic_;
};

}  // namespace tta::eval
