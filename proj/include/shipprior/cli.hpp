/**
 * @file cli.hpp
 * @brief Command-line front end: sse, gradmap, trimap, detect, eval, schedule, augment.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shipprior::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kInternalError = 2,
};

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "SHIPPRIOR_WORKERS";

/// Parses args (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shipprior::cli
