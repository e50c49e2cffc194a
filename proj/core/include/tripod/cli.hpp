#pragma once

namespace tripod {

// Command-line front end. Returns the process exit code: 0 success,
// 1 usage or config error, 2 infeasible or unstable request.
int run_cli(int argc, const char* const* argv);

}  // namespace tripod
