#pragma once

#include <iosfwd>

namespace febe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Full command-line entry point:
///   febe <scenario> [--config FILE] [--set key=value]... [--out DIR] [--svg]
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace febe::cli
