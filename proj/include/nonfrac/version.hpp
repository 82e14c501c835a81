#pragma once

namespace nonfrac {

inline constexpr const char* kVersion = "nonfrac 1.0.0";

}  // namespace nonfrac
