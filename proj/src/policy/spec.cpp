#include "tta/policy/spec.hpp"

#include "tta/env/observation.hpp"

namespace tta::policy {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid policy spec: " + what);
}

}  // namespace

void PolicySpec::validate() const {
  require(image_channels > 0, "image_channels");
  require(image_size > 0, "image_size");
  if (cnn == CnnKind::Small) {
    require(cnn_channels.size() == 3, "cnn_channels needs three entries");
    for (int c : cnn_channels) require(c > 0, "cnn_channels");
    // 8x8/4, 4x4/2, 3x3/1 must leave a non-empty map.
    const int s1 = (image_size - 8) / 4 + 1;
    const int s2 = (s1 - 4) / 2 + 1;
    require(image_size >= 8 && s1 >= 4 && s2 >= 3, "image_size too small for the extractor");
  } else {
    require(image_size >= 32, "image_size too small for resnet18");
  }
  require(cnn_feature_dim > 0, "cnn_feature_dim");
  if (use_history) {
    require(rnn_input_dim == env::kNumButtons, "rnn_input_dim must equal the button count");
    require(rnn_hidden_dim > 0, "rnn_hidden_dim");
    require(rnn_layers > 0, "rnn_layers");
    require(rnn_dropout >= 0.0 && rnn_dropout < 1.0, "rnn_dropout");
    require(history_length > 0, "history_length");
  }
  require(scalar_dim >= 0, "scalar_dim");
  require(!actor_layers.empty() && !critic_layers.empty(), "head layers");
  for (int w : actor_layers) require(w > 0, "actor_layers");
  for (int w : critic_layers) require(w > 0, "critic_layers");
  require(action_dim == env::kNumButtons, "action_dim must equal the button count");
}

PolicySpec default_spec(int roster_size, bool fidelity) {
  PolicySpec s;
  s.scalar_dim = env::scalar_dim(roster_size);
  if (fidelity) s.cnn = CnnKind::ResNet18;
  return s;
}

nlohmann::json spec_to_json(const PolicySpec& s) {
  return {
      {"image_channels", s.image_channels},
      {"image_size", s.image_size},
      {"cnn", s.cnn == CnnKind::Small ? "small" : "resnet18"},
      {"cnn_channels", s.cnn_channels},
      {"cnn_feature_dim", s.cnn_feature_dim},
      {"use_history", s.use_history},
      {"rnn_input_dim", s.rnn_input_dim},
      {"rnn_hidden_dim", s.rnn_hidden_dim},
      {"rnn_layers", s.rnn_layers},
      {"rnn_dropout", s.rnn_dropout},
      {"history_length", s.history_length},
      {"scalar_dim", s.scalar_dim},
      {"actor_layers", s.actor_layers},
      {"critic_layers", s.critic_layers},
      {"action_dim", s.action_dim},
  };
}

PolicySpec spec_from_json(const nlohmann::json& j) {
  PolicySpec s;
  try {
    s.image_channels = j.at("image_channels").get<int>();
    s.image_size = j.at("image_size").get<int>();
    const auto cnn = j.at("cnn").get<std::string>();
    if (cnn == "small") {
      s.cnn = CnnKind::Small;
    } else if (cnn == "resnet18") {
      s.cnn = CnnKind::ResNet18;
    } else {
      throw std::invalid_argument("invalid policy spec: unknown cnn '" + cnn + "'");
    }
    s.cnn_channels = j.at("cnn_channels").get<std::vector<int>>();
    s.cnn_feature_dim = j.at("cnn_feature_dim").get<int>();
    s.use_history = j.at("use_history").get<bool>();
    s.rnn_input_dim = j.at("rnn_input_dim").get<int>();
    s.rnn_hidden_dim = j.at("rnn_hidden_dim").get<int>();
    s.rnn_layers = j.at("rnn_layers").get<int>();
    s.rnn_dropout = j.at("rnn_dropout").get<double>();
    s.history_length = j.at("history_length").get<int>();
    s.scalar_dim = j.at("scalar_dim").get<int>();
    s.actor_layers = j.at("actor_layers").get<std::vector<int>>();
    s.critic_layers = j.at("critic_layers").get<std::vector<int>>();
    s.action_dim = j.at("action_dim").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid policy spec: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace tta::policy
