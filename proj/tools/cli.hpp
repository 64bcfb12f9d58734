#pragma once

#include <iosfwd>

namespace splinet::cli {

/// Runs the splinet command line. Returns 0 on success, 1 when a computation
/// fails, 2 on a usage error (unknown flag, bad value, missing subcommand).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace splinet::cli
