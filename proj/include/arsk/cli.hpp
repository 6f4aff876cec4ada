#ifndef ARSK_CLI_HPP
#define ARSK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace arsk::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInternal = 1,
    kParseOrConfig = 2,
    kDegenerateWeights = 3,
    kNonConvergence = 4,
    kTuningFailed = 5,
};

// Entry point shared by the `arsk` binary and the tests. `args` excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arsk::cli

#endif  // ARSK_CLI_HPP
