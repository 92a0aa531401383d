#pragma once

namespace nmwit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nmwit
