#pragma once

#include <ostream>

namespace wpvol {

// Exit codes: 0 success, 1 domain error or failed verification, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wpvol
