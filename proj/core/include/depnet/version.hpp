#pragma once

namespace depnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace depnet
