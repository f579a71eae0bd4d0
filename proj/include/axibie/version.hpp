#pragma once

namespace axibie {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace axibie
