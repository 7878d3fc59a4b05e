#pragma once
// The `dlab` command line. Exit codes: 0 success, 1 a check or search came
// back negative, 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace dlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace dlab
