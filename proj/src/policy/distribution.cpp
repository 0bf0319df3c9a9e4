#include "tta/policy/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace tta::policy {

namespace {

void check_width(std::span<const float> probs) {
  if (probs.size() != static_cast<std::size_t>(env::kNumButtons))
    throw std::invalid_argument("expected 12 button probabilities");
}

}  // namespace

double bernoulli_log_prob(std::span<const float> probs, env::ButtonVector action) {
  check_width(probs);
  double total = 0.0;
  for (int i = 0; i < env::kNumButtons; ++i) {
    const double p = probs[i];
    total += action.test(i) ? std::log(p) : std::log(1.0 - p);
  }
  return total;
}

double bernoulli_entropy(std::span<const float> probs) {
  check_width(probs);
  double h = 0.0;
  for (float pf : probs) {
    const double p = pf;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  }
  return h;
}

SampledAction sample_action(std::span<const float> probs, Rng& rng) {
  check_width(probs);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uint16_t mask = 0;
  for (int i = 0; i < env::kNumButtons; ++i) {
    if (!(probs[i] > 0.0f && probs[i] < 1.0f))
      throw std::invalid_argument("button probability outside (0, 1)");
    if (u(rng) < probs[i]) mask |= static_cast<std::uint16_t>(1u << i);
  }
  SampledAction out;
  out.buttons = env::ButtonVector::from_mask(mask);
  out.log_prob = bernoulli_log_prob(probs, out.buttons);
  return out;
}

env::ButtonVector mode_action(std::span<const float> probs) {
  check_width(probs);
  std::uint16_t mask = 0;
  for (int i = 0; i < env::kNumButtons; ++i)
    if (probs[i] > 0.5f) mask |= static_cast<std::uint16_t>(1u << i);
  return env::ButtonVector::from_mask(mask);
}

}  // namespace tta::policy
