#pragma once

namespace landau {
inline constexpr const char* kVersion = "1.0.0";
}
