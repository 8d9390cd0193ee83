#pragma once

#include <ostream>

namespace toucan::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kSimulationFault = 3,
};

/// Entry point for `toucan bench|run|analyze|wrap`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace toucan::cli
