#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace warpwatch::cli {

/// Entry point behind the `warpwatch` binary; exposed so tests can drive
/// the exact production path. args excludes argv[0].
/// Exit codes: 0 success, 1 validation error, 2 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace warpwatch::cli
