#ifndef TGV_CLI_APP_HPP
#define TGV_CLI_APP_HPP

#include <string>
#include <vector>

namespace tgv {

// Command dispatch for the tgvdenoise tool. Returns the process exit code:
// 0 success, 1 usage/configuration/IO error, 2 solver hit max_iters without
// converging.
int run_cli(const std::vector<std::string>& args);

}  // namespace tgv

#endif
