#pragma once

#include <string>

namespace qzeta_cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Full CLI entry point; returns the process exit code.
// 0 = success, 2 = usage error, 3 = mathematical domain error.
int run_cli(int argc, const char* const* argv);

// 17 significant digits, enough for a lossless double round-trip.
std::string format_double(double x);

} // namespace qzeta_cli
