#pragma once

namespace gq {

inline constexpr const char* kCliVersion = "1.0.0";

/// Entry point of the command line tool (separable for in-process testing).
/// Exit codes: 0 success, 2 invalid input, 3 numeric failure.
int cli_main(int argc, const char* const* argv);

}  // namespace gq
