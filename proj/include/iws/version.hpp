#pragma once

namespace iws {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace iws
