#pragma once

namespace rotsim {
inline constexpr const char* version = "0.1.0";
}
