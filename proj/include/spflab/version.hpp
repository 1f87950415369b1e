#pragma once

namespace spflab {
inline constexpr const char* kVersion = "1.0.0";
}
