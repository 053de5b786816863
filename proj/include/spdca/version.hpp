#pragma once

namespace spdca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spdca
