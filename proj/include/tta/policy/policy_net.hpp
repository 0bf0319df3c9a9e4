#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

#include "tta/env/observation.hpp"
#include "tta/policy/checkpoint.hpp"
#include "tta/policy/spec.hpp"

namespace tta::policy {

/// A batch of observations as CPU tensors. Images stay uint8 until forward.
struct ObservationBatch {
  torch::Tensor image;          // [B, C, H, W] uint8 (or floating in [0, 1])
  torch::Tensor scalars;        // [B, S] float
  torch::Tensor history;        // [B, L, 12] float
  torch::Tensor history_valid;  // [B] int64

  std::int64_t size() const { return scalars.size(0); }
  ObservationBatch index(const torch::Tensor& rows) const;
  ObservationBatch to(torch::Dtype dtype) const;  // casts the float parts
};

ObservationBatch make_batch(std::span<const env::Observation* const> observations);
ObservationBatch make_batch(const std::vector<env::Observation>& observations);

struct PolicyOutput {
  torch::Tensor logits;  // [B, 12], clamped to [-15, 15]
  torch::Tensor probs;   // [B, 12]
  torch::Tensor value;   // [B]
};

struct ActionEvaluation {
  torch::Tensor log_prob;  // [B] double
  torch::Tensor entropy;   // [B] double
  torch::Tensor value;     // [B]
};

inline constexpr double kLogitClamp = 15.0;

/// Actor-critic: image extractor, LSTM over the valid suffix of the action
/// history, and the scalar vector feed shared MLP heads. The actor emits 12
/// independent Bernoulli probabilities; the critic a scalar value.
class PolicyNetImpl : public torch::nn::Module {
 public:
  explicit PolicyNetImpl(PolicySpec spec);

  PolicyOutput forward(const ObservationBatch& batch);

  /// Joint Bernoulli log-probability and entropy of `actions` ([B, 12] in
  /// {0, 1}), computed in double precision.
  ActionEvaluation evaluate_actions(const ObservationBatch& batch, const torch::Tensor& actions);

  /// History features alone, [B, hidden]; zero when no valid rows exist.
  torch::Tensor encode_history(const torch::Tensor& history, const torch::Tensor& valid);

  const PolicySpec& spec() const { return spec_; }

  /// Orthogonal weights (actor output gain 0.01, critic output gain 1), zero biases.
  void reset_parameters();

 private:
  PolicySpec spec_;
  torch::nn::Sequential cnn_{nullptr};
  torch::nn::LSTM lstm_{nullptr};
  torch::nn::Sequential actor_{nullptr};
  torch::nn::Sequential critic_{nullptr};
};
TORCH_MODULE(PolicyNet);

/// Builds a network with weights drawn from a seeded generator.
PolicyNet make_policy(const PolicySpec& spec, std::uint64_t seed);

/// Writes the container atomically; identical parameters give identical bytes.
void save_checkpoint(PolicyNet& net, const std::filesystem::path& path,
                     const nlohmann::json& metadata = nlohmann::json::object());

/// Rebuilds the network from the stored spec. With `expected`, a differing
/// spec is rejected. Throws CheckpointError on any mismatch or corruption.
PolicyNet load_checkpoint(const std::filesystem::path& path, const PolicySpec* expected = nullptr,
                          nlohmann::json* metadata = nullptr);

/// Row r of a [B, 12] probability tensor as floats.
std::vector<float> probs_row(const torch::Tensor& probs, std::int64_t r);

}  // namespace tta::policy
