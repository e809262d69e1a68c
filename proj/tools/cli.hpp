#pragma once

#include <iosfwd>

namespace packnet {

/// Entry point of the `packnet` tool. Returns 0 on success, 1 when a module
/// reports an error and 2 for usage errors (unknown flag or subcommand, no
/// arguments).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace packnet
