#pragma once

namespace febe {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace febe
