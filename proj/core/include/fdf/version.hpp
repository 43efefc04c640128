#pragma once

namespace fdf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fdf
