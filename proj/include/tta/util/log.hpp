#pragma once

#include <string_view>

namespace tta::util {

// Thin front for the process logger. Kept free of logging-library headers
// so it can be included next to libtorch, which bundles its own fmt.
void log_info(std::string_view msg);
void log_warn(std::string_view msg);
void log_error(std::string_view msg);

}  // namespace tta::util
