#pragma once

namespace expsum {

inline constexpr const char* version = "0.1.0";

}  // namespace expsum
