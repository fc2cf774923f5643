#pragma once

namespace qsl {

inline constexpr const char* version = "0.1.0";

}  // namespace qsl
