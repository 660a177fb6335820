#pragma once

namespace gateways {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kName = "gateways";

}  // namespace gateways
