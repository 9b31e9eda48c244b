#pragma once

namespace lpfusion {

inline constexpr const char* kToolName = "lpfusion";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace lpfusion
