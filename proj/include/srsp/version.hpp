#pragma once

namespace srsp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace srsp
