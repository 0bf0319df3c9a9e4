#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/env/buttons.hpp"
#include "tta/env/config.hpp"

namespace tta::policy {

enum class CnnKind { Small, ResNet18 };

/// Shape and hyper-parameters of the actor-critic network.
struct PolicySpec {
  int image_channels = env::config::kImageChannels;
  int image_size = env::config::kImageSize;
  CnnKind cnn = CnnKind::Small;
  std::vector<int> cnn_channels = {32, 64, 64};  // small extractor only
  int cnn_feature_dim = 256;

  bool use_history = true;  // false gives the CNN+MLP baseline
  int rnn_input_dim = env::kNumButtons;
  int rnn_hidden_dim = 128;
  int rnn_layers = 2;
  double rnn_dropout = 0.1;
  int history_length = env::config::kHistoryLength;

  int scalar_dim = 0;
  std::vector<int> actor_layers = {512, 256, 128, 128};
  std::vector<int> critic_layers = {512, 256, 128, 128};
  int action_dim = env::kNumButtons;

  /// Feature width entering the actor and critic heads.
  int trunk_dim() const {
    return cnn_feature_dim + (use_history ? rnn_hidden_dim : 0) + scalar_dim;
  }

  /// Throws std::invalid_argument on an inconsistent spec.
  void validate() const;

  bool operator==(const PolicySpec&) const = default;
};

/// Defaults for the built-in roster; `fidelity` selects the ResNet18 extractor.
PolicySpec default_spec(int roster_size, bool fidelity = false);

nlohmann::json spec_to_json(const PolicySpec& spec);
PolicySpec spec_from_json(const nlohmann::json& doc);

}  // namespace tta::policy
