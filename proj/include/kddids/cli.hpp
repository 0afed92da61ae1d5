// cli.hpp
//
// The kddids command line: summarize, curate, train, evaluate, compare.

#ifndef KDDIDS_CLI_HPP
#define KDDIDS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace kddids {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

/// environment variable naming the directory searched for relative inputs
inline constexpr const char *kDataDirEnv = "KDDIDS_DATA_DIR";

/// runs one command; args excludes the program name
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace kddids

#endif
