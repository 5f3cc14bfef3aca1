#pragma once

namespace landauer {
inline constexpr const char* version = "0.1.0";
}
