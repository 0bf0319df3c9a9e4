#include "tta/util/files.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

namespace tta::util {

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  auto tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw FileError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FileError("cannot replace " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace tta::util
