#include "tta/eval/net_controller.hpp"

namespace tta::eval {

NetController::NetController(policy::PolicyNet net, std::string name, bool deterministic)
    : net_(std::move(net)), name_(std::move(name)), deterministic_(deterministic) {
  net_->eval();
}

std::vector<env::ButtonVector> NetController::act(std::span<const ControlContext> batch) {
  if (batch.empty()) return {};
  std::vector<const env::Observation*> obs;
  obs.reserve(batch.size());
  for (const auto& c : batch) {
    if (!c.observation) throw std::invalid_argument("network controller needs observations");
    obs.push_back(c.observation);
  }
  torch::NoGradGuard guard;
  const auto out = net_->forward(policy::make_batch(obs));
  const auto probs = out.probs.to(torch::kFloat32).contiguous();
  std::vector<env::ButtonVector> actions;
  actions.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto p = policy::probs_row(probs, static_cast<std::int64_t>(i));
    const auto own = deterministic_ ? policy::mode_action(p) : policy::sample_action(p, *batch[i].rng).buttons;
    actions.push_back(env::to_own_frame(own, batch[i].side));
  }
  return actions;
}

}  // namespace tta::eval
