#pragma once

#include <iosfwd>

namespace emgdrift::cli {

/// Parses argv and runs one subcommand. Returns 0 on success, 1 on a data
/// or validation error, 2 on a usage error. Data goes to files or `out`,
/// diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emgdrift::cli
