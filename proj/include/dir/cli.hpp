#ifndef DIR_CLI_HPP
#define DIR_CLI_HPP

#include <string>
#include <vector>

namespace dir::cli {

// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 computation error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args); // args without the program name

} // namespace dir::cli

#endif
