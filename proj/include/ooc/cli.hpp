#pragma once

#include <iosfwd>

#include "ooc/error.hpp"

namespace ooc {

/// 0 ok, 1 usage or malformed input, 2 assumption violation, 3 divergence.
int exit_code(ErrorKind kind) noexcept;

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ooc
