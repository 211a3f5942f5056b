#ifndef SALEM_TOOLS_CLI_H_
#define SALEM_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace salem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitInput = 2;

inline constexpr const char* kToolVersion = "0.1.0";

// Parses argv and runs one subcommand. Results go to `out`, diagnostics to
// `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int Run(int argc, char** argv);

}  // namespace salem::cli

#endif  // SALEM_TOOLS_CLI_H_
