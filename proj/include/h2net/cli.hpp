#pragma once

namespace h2net {

// Full command-line front end.  Returns the process exit code:
//   0 success, 2 infeasible design, 3 invalid input, 4 numerical failure,
//   5 IO error.
int run_cli(int argc, const char* const* argv);

} // namespace h2net
