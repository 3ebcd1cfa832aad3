#pragma once

namespace gws {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace gws
