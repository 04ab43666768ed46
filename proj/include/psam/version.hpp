#pragma once

namespace psam {

inline constexpr const char* kToolName = "psam-rate";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace psam
