#pragma once

namespace onebit {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace onebit
