#pragma once

namespace netspect {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace netspect
