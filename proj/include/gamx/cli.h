#ifndef GAMX_CLI_H_
#define GAMX_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace gamx {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNo = 1;  // decision answered No under --strict-exit
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitUnsupported = 3;
inline constexpr int kExitPrecision = 4;

// args excludes the program name. Results go to out, diagnostics to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gamx

#endif  // GAMX_CLI_H_
