#pragma once

#include <array>
#include <random>
#include <span>

#include "tta/env/buttons.hpp"

namespace tta::policy {

using Rng = std::mt19937_64;

struct SampledAction {
  env::ButtonVector buttons;
  double log_prob = 0.0;
};

/// Joint log-probability of independent Bernoulli buttons:
/// sum_i b_i log p_i + (1 - b_i) log(1 - p_i).
double bernoulli_log_prob(std::span<const float> probs, env::ButtonVector action);

double bernoulli_entropy(std::span<const float> probs);

/// Samples every button independently; the probabilities must lie in (0, 1).
SampledAction sample_action(std::span<const float> probs, Rng& rng);

/// Presses every button with p > 0.5.
env::ButtonVector mode_action(std::span<const float> probs);

}  // namespace tta::policy
