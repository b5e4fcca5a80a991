#pragma once

namespace aofdm {
inline constexpr const char* kVersion = "0.1.0";
}
