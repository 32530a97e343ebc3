#pragma once

#include <iosfwd>

namespace rcr::cli {

/// Entry point for the `rcr` tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rcr::cli
