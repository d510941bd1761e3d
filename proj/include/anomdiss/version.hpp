#pragma once

namespace anomdiss {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace anomdiss
