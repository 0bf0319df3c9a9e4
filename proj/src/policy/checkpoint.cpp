#include "tta/policy/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace tta::policy {

std::int64_t TensorRecord::numel() const {
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw CheckpointError("not a policy checkpoint: " + path.string());
  unsigned char len_bytes[8];
  if (!in.read(reinterpret_cast<char*>(len_bytes), 8))
    throw CheckpointError("truncated checkpoint header: " + path.string());
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) len = (len << 8) | len_bytes[i];

  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec || len > file_size) throw CheckpointError("truncated checkpoint header: " + path.string());

  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len)))
    throw CheckpointError("truncated checkpoint header: " + path.string());

  CheckpointHeader h;
  try {
    const auto doc = nlohmann::json::parse(text);
    h.format_version = doc.at("format_version").get<int>();
    if (h.format_version != kCheckpointFormatVersion)
      throw CheckpointError("unsupported checkpoint format_version " +
                            std::to_string(h.format_version));
    h.spec = spec_from_json(doc.at("spec"));
    h.metadata = doc.value("metadata", nlohmann::json::object());
    for (const auto& t : doc.at("tensors")) {
      TensorRecord r;
      r.name = t.at("name").get<std::string>();
      r.shape = t.at("shape").get<std::vector<std::int64_t>>();
      for (auto d : r.shape)
        if (d < 0) throw CheckpointError("negative tensor dimension in " + r.name);
      h.tensors.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(e.what());
  }
  h.data_offset = 16 + len;
  std::uint64_t need = h.data_offset;
  for (const auto& t : h.tensors) need += static_cast<std::uint64_t>(t.numel()) * sizeof(float);
  if (need != file_size)
    throw CheckpointError("checkpoint size mismatch (expected " + std::to_string(need) +
                          " bytes, found " + std::to_string(file_size) + ")");
  return h;
}

bool is_loadable_checkpoint(const std::filesystem::path& path, std::string* reason) {
  try {
    read_checkpoint_header(path);
    return true;
  } catch (const std::exception& e) {
    if (reason) *reason = e.what();
    return false;
  }
}

}  // namespace tta::policy
