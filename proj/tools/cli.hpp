#pragma once

#include <iosfwd>

namespace triage {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Entry point of the triage-lab command line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace triage
