#pragma once

namespace tukey_ep {
inline constexpr const char* kVersion = "0.1.0";
}
