#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace tta::util {

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `text` next to `path` and renames it into place, so readers see
/// either the old or the new file, never a partial one.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

std::string read_file(const std::filesystem::path& path);

}  // namespace tta::util
