#include "tta/policy/policy_net.hpp"

#include <cstring>
#include <fstream>

namespace tta::policy {

namespace nn = torch::nn;

namespace {

nn::Sequential mlp(int in, const std::vector<int>& widths, int out) {
  nn::Sequential seq;
  int prev = in;
  for (int w : widths) {
    seq->push_back(nn::Linear(prev, w));
    seq->push_back(nn::Tanh());
    prev = w;
  }
  seq->push_back(nn::Linear(prev, out));
  return seq;
}

nn::Sequential small_cnn(const PolicySpec& s) {
  const int s1 = (s.image_size - 8) / 4 + 1;
  const int s2 = (s1 - 4) / 2 + 1;
  const int s3 = s2 - 2;
  nn::Sequential seq(
      nn::Conv2d(nn::Conv2dOptions(s.image_channels, s.cnn_channels[0], 8).stride(4)), nn::ReLU(),
      nn::Conv2d(nn::Conv2dOptions(s.cnn_channels[0], s.cnn_channels[1], 4).stride(2)), nn::ReLU(),
      nn::Conv2d(nn::Conv2dOptions(s.cnn_channels[1], s.cnn_channels[2], 3).stride(1)), nn::ReLU(),
      nn::Flatten(), nn::Linear(s.cnn_channels[2] * s3 * s3, s.cnn_feature_dim), nn::ReLU());
  return seq;
}

struct BasicBlockImpl : nn::Module {
  BasicBlockImpl(int in, int out, int stride) {
    conv1 = register_module(
        "conv1", nn::Conv2d(nn::Conv2dOptions(in, out, 3).stride(stride).padding(1).bias(false)));
    bn1 = register_module("bn1", nn::BatchNorm2d(out));
    conv2 = register_module(
        "conv2", nn::Conv2d(nn::Conv2dOptions(out, out, 3).stride(1).padding(1).bias(false)));
    bn2 = register_module("bn2", nn::BatchNorm2d(out));
    if (stride != 1 || in != out) {
      down = register_module(
          "down", nn::Sequential(nn::Conv2d(nn::Conv2dOptions(in, out, 1).stride(stride).bias(false)),
                                 nn::BatchNorm2d(out)));
    }
  }
  torch::Tensor forward(torch::Tensor x) {
    auto y = torch::relu(bn1(conv1(x)));
    y = bn2(conv2(y));
    return torch::relu(y + (down ? down->forward(x) : x));
  }
  nn::Conv2d conv1{nullptr}, conv2{nullptr};
  nn::BatchNorm2d bn1{nullptr}, bn2{nullptr};
  nn::Sequential down{nullptr};
};
TORCH_MODULE(BasicBlock);

nn::Sequential resnet18(const PolicySpec& s) {
  nn::Sequential seq(
      nn::Conv2d(nn::Conv2dOptions(s.image_channels, 64, 7).stride(2).padding(3).bias(false)),
      nn::BatchNorm2d(64), nn::ReLU(), nn::MaxPool2d(nn::MaxPool2dOptions(3).stride(2).padding(1)));
  int in = 64;
  for (int width : {64, 128, 256, 512}) {
    seq->push_back(BasicBlock(in, width, width == 64 ? 1 : 2));
    seq->push_back(BasicBlock(width, width, 1));
    in = width;
  }
  seq->push_back(nn::AdaptiveAvgPool2d(nn::AdaptiveAvgPool2dOptions(1)));
  seq->push_back(nn::Flatten());
  seq->push_back(nn::Linear(512, s.cnn_feature_dim));
  seq->push_back(nn::ReLU());
  return seq;
}

void init_sequential(nn::Sequential& seq, double hidden_gain, double last_gain) {
  std::vector<nn::Module*> layers;
  for (auto& m : seq->modules(/*include_self=*/false))
    if (m->as<nn::Linear>() || m->as<nn::Conv2d>()) layers.push_back(m.get());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const double gain = i + 1 == layers.size() ? last_gain : hidden_gain;
    if (auto* l = layers[i]->as<nn::Linear>()) {
      nn::init::orthogonal_(l->weight, gain);
      nn::init::zeros_(l->bias);
    } else if (auto* c = layers[i]->as<nn::Conv2d>()) {
      nn::init::orthogonal_(c->weight, gain);
      if (c->bias.defined()) nn::init::zeros_(c->bias);
    }
  }
}

}  // namespace

ObservationBatch ObservationBatch::index(const torch::Tensor& rows) const {
  return {image.index_select(0, rows), scalars.index_select(0, rows),
          history.index_select(0, rows), history_valid.index_select(0, rows)};
}

ObservationBatch ObservationBatch::to(torch::Dtype dtype) const {
  auto img = image.is_floating_point() ? image.to(dtype) : image;
  return {img, scalars.to(dtype), history.to(dtype), history_valid};
}

ObservationBatch make_batch(std::span<const env::Observation* const> obs) {
  const auto n = static_cast<std::int64_t>(obs.size());
  if (n == 0) throw std::invalid_argument("empty observation batch");
  const auto s = static_cast<std::int64_t>(obs[0]->scalars.size());
  const auto l = static_cast<std::int64_t>(obs[0]->history_length());
  ObservationBatch b;
  b.image = torch::empty({n, env::Image::kChannels, env::Image::kSize, env::Image::kSize},
                         torch::kUInt8);
  b.scalars = torch::empty({n, s}, torch::kFloat32);
  b.history = torch::empty({n, l, env::kNumButtons}, torch::kFloat32);
  b.history_valid = torch::empty({n}, torch::kInt64);
  auto* img = b.image.data_ptr<std::uint8_t>();
  auto* sc = b.scalars.data_ptr<float>();
  auto* hi = b.history.data_ptr<float>();
  auto* va = b.history_valid.data_ptr<std::int64_t>();
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& o = *obs[static_cast<std::size_t>(i)];
    if (static_cast<std::int64_t>(o.scalars.size()) != s || o.history_length() != l)
      throw std::invalid_argument("observations in a batch must share shapes");
    std::memcpy(img + i * env::Image::kPixels, o.image.data.data(), env::Image::kPixels);
    std::memcpy(sc + i * s, o.scalars.data(), sizeof(float) * s);
    std::memcpy(hi + i * l * env::kNumButtons, o.history.data(), sizeof(float) * l * env::kNumButtons);
    va[i] = o.history_valid;
  }
  return b;
}

ObservationBatch make_batch(const std::vector<env::Observation>& observations) {
  std::vector<const env::Observation*> ptrs;
  ptrs.reserve(observations.size());
  for (const auto& o : observations) ptrs.push_back(&o);
  return make_batch(std::span<const env::Observation* const>(ptrs));
}

PolicyNetImpl::PolicyNetImpl(PolicySpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  cnn_ = register_module("cnn", spec_.cnn == CnnKind::Small ? small_cnn(spec_) : resnet18(spec_));
  if (spec_.use_history) {
    lstm_ = register_module(
        "lstm", nn::LSTM(nn::LSTMOptions(spec_.rnn_input_dim, spec_.rnn_hidden_dim)
                             .num_layers(spec_.rnn_layers)
                             .dropout(spec_.rnn_layers > 1 ? spec_.rnn_dropout : 0.0)
                             .batch_first(true)));
  }
  actor_ = register_module("actor", mlp(spec_.trunk_dim(), spec_.actor_layers, spec_.action_dim));
  critic_ = register_module("critic", mlp(spec_.trunk_dim(), spec_.critic_layers, 1));
  reset_parameters();
}

void PolicyNetImpl::reset_parameters() {
  torch::NoGradGuard guard;
  init_sequential(cnn_, std::sqrt(2.0), std::sqrt(2.0));
  init_sequential(actor_, std::sqrt(2.0), 0.01);
  init_sequential(critic_, std::sqrt(2.0), 1.0);
}

torch::Tensor PolicyNetImpl::encode_history(const torch::Tensor& history,
                                            const torch::Tensor& valid) {
  const auto b = history.size(0);
  const auto l = history.size(1);
  const auto d = history.size(2);
  auto len = valid.to(torch::kInt64).clamp(0, l);
  auto steps = torch::arange(l, torch::kInt64).unsqueeze(0);
  // Left-align the valid suffix: row t of the packed input is history[l - len + t].
  auto idx = ((l - len).unsqueeze(1) + steps).clamp_max(l - 1);
  auto mask = (steps < len.unsqueeze(1)).to(history.dtype()).unsqueeze(-1);
  auto aligned = history.gather(1, idx.unsqueeze(-1).expand({b, l, d})) * mask;
  // The LSTM is causal, so the last layer's output at row len - 1 equals the
  // final state over the valid rows alone; running full length avoids the
  // slow variable-length packed path.
  auto out = std::get<0>(lstm_->forward(aligned));  // [B, L, H]
  const auto h = out.size(2);
  auto at = (len - 1).clamp_min(0).view({b, 1, 1}).expand({b, 1, h});
  auto last = out.gather(1, at).squeeze(1);
  return last * (len > 0).to(last.dtype()).unsqueeze(1);
}

PolicyOutput PolicyNetImpl::forward(const ObservationBatch& batch) {
  const auto dtype = actor_->parameters().front().scalar_type();
  torch::Tensor image = batch.image.is_floating_point()
                            ? batch.image.to(dtype)
                            : batch.image.to(dtype).div(255.0);
  std::vector<torch::Tensor> parts{cnn_->forward(image)};
  if (spec_.use_history)
    parts.push_back(encode_history(batch.history.to(dtype), batch.history_valid));
  if (spec_.scalar_dim > 0) parts.push_back(batch.scalars.to(dtype));
  auto trunk = torch::cat(parts, 1);
  PolicyOutput out;
  out.logits = actor_->forward(trunk).clamp(-kLogitClamp, kLogitClamp);
  out.probs = torch::sigmoid(out.logits);
  out.value = critic_->forward(trunk).squeeze(-1);
  return out;
}

ActionEvaluation PolicyNetImpl::evaluate_actions(const ObservationBatch& batch,
                                                 const torch::Tensor& actions) {
  auto out = forward(batch);
  auto p = out.probs.to(torch::kFloat64);
  auto a = actions.to(torch::kFloat64);
  auto log_p = torch::log(p);
  auto log_q = torch::log(1.0 - p);
  ActionEvaluation ev;
  ev.log_prob = (a * log_p + (1.0 - a) * log_q).sum(-1);
  ev.entropy = -(p * log_p + (1.0 - p) * log_q).sum(-1);
  ev.value = out.value;
  return ev;
}

PolicyNet make_policy(const PolicySpec& spec, std::uint64_t seed) {
  torch::manual_seed(seed);
  return PolicyNet(spec);
}

namespace {

std::vector<std::pair<std::string, torch::Tensor>> state_tensors(PolicyNet& net) {
  std::vector<std::pair<std::string, torch::Tensor>> out;
  for (const auto& item : net->named_parameters(true)) out.emplace_back(item.key(), item.value());
  for (const auto& item : net->named_buffers(true)) out.emplace_back(item.key(), item.value());
  return out;
}

}  // namespace

void save_checkpoint(PolicyNet& net, const std::filesystem::path& path,
                     const nlohmann::json& metadata) {
  auto tensors = state_tensors(net);
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [name, t] : tensors) records.push_back({{"name", name}, {"shape", t.sizes().vec()}});
  const nlohmann::json header = {{"format_version", kCheckpointFormatVersion},
                                 {"spec", spec_to_json(net->spec())},
                                 {"metadata", metadata},
                                 {"tensors", records}};
  const std::string text = header.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
    out.write(kCheckpointMagic, 8);
    std::uint64_t len = text.size();
    unsigned char len_bytes[8];
    for (int i = 0; i < 8; ++i) len_bytes[i] = static_cast<unsigned char>((len >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(len_bytes), 8);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& [name, t] : tensors) {
      auto flat = t.detach().to(torch::kCPU, torch::kFloat32).contiguous();
      out.write(reinterpret_cast<const char*>(flat.data_ptr<float>()),
                static_cast<std::streamsize>(flat.numel() * sizeof(float)));
    }
    if (!out) throw CheckpointError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PolicyNet load_checkpoint(const std::filesystem::path& path, const PolicySpec* expected,
                          nlohmann::json* metadata) {
  const CheckpointHeader header = read_checkpoint_header(path);
  if (expected && !(header.spec == *expected))
    throw CheckpointError("checkpoint spec does not match the expected network: " + path.string());
  PolicyNet net(header.spec);
  auto tensors = state_tensors(net);
  if (tensors.size() != header.tensors.size())
    throw CheckpointError("checkpoint tensor count mismatch in " + path.string());

  std::ifstream in(path, std::ios::binary);
  in.seekg(static_cast<std::streamoff>(header.data_offset));
  torch::NoGradGuard guard;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& rec = header.tensors[i];
    auto& [name, t] = tensors[i];
    if (rec.name != name || rec.shape != t.sizes().vec())
      throw CheckpointError("checkpoint tensor '" + rec.name + "' does not match '" + name + "'");
    auto buf = torch::empty(t.sizes(), torch::kFloat32);
    if (!in.read(reinterpret_cast<char*>(buf.data_ptr<float>()),
                 static_cast<std::streamsize>(buf.numel() * sizeof(float))))
      throw CheckpointError("truncated tensor data in " + path.string());
    t.copy_(buf.to(t.dtype()));
  }
  if (metadata) *metadata = header.metadata;
  return net;
}

std::vector<float> probs_row(const torch::Tensor& probs, std::int64_t r) {
  auto row = probs[r].to(torch::kFloat32).contiguous();
  const float* p = row.data_ptr<float>();
  return {p, p + row.numel()};
}

}  // namespace tta::policy
