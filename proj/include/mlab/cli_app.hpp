#pragma once

#include <iosfwd>

namespace mlab::cli {

/// Parses argv and dispatches. Machine-readable records go to `out` as
/// line-delimited JSON; human-readable notes (timings) go to `err` unless
/// --quiet. Returns the process exit code: 0 ok, 1 computation error,
/// 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlab::cli
