#pragma once

namespace qclat {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qclat
