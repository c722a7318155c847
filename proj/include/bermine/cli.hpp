#ifndef BERMINE_CLI_HPP
#define BERMINE_CLI_HPP

#include <vector>
#include <string>

namespace bermine::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNoRegion = 2;
inline constexpr int kExitIo = 3;

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace bermine::cli

#endif  // BERMINE_CLI_HPP
