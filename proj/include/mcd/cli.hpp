#pragma once

#include <cstdint>
#include <ostream>

#include "mcd/json_io.hpp"

namespace mcd {

// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kInvalid = 1, kNonConvergence = 2 };

// Full analysis of a system; `validation` is always present, the rest only
// when the system validates.
Json analyze_report(const CurveSystem& sys);

// Residual table for the maps of a worked example (1 or 2).
Json verify_example_report(int example, std::uint64_t seed, bool& all_ok);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcd
