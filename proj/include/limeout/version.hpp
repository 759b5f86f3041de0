#pragma once

namespace limeout {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace limeout
