#pragma once

namespace delaydyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace delaydyn
