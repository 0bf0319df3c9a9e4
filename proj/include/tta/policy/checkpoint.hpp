#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tta/policy/spec.hpp"

namespace tta::policy {

inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr char kCheckpointMagic[8] = {'T', 'T', 'A', 'C', 'K', 'P', 'T', '\n'};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TensorRecord {
  std::string name;
  std::vector<std::int64_t> shape;
  std::int64_t numel() const;
};

/// Container layout: 8-byte magic, little-endian u64 header length, the JSON
/// header {format_version, spec, metadata, tensors}, then float32 tensor data
/// in header order.
struct CheckpointHeader {
  int format_version = 0;
  PolicySpec spec;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<TensorRecord> tensors;
  std::uint64_t data_offset = 0;
};

/// Reads and validates the header (magic, version, declared sizes against
/// the file length) without touching tensor data.
CheckpointHeader read_checkpoint_header(const std::filesystem::path& path);

bool is_loadable_checkpoint(const std::filesystem::path& path, std::string* reason = nullptr);

}  // namespace tta::policy
