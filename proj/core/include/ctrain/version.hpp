#pragma once

#include <string_view>

namespace ctrain {

// Keep in sync with the top-level CMake project version.
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace ctrain
