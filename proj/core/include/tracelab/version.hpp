#pragma once

namespace tracelab {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace tracelab
