#pragma once

namespace gridwalk {

inline constexpr const char* kToolName = "gridwalk";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace gridwalk
