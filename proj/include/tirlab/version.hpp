#pragma once

namespace tirlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tirlab
