#pragma once

namespace isospec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace isospec
