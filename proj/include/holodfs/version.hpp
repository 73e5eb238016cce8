#pragma once

namespace holodfs {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace holodfs
