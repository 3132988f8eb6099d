#pragma once

#include <iosfwd>

namespace maxgraph::cli {

/// Command-line entry point. Returns 0 on success, 1 on a domain or
/// validation error, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxgraph::cli
