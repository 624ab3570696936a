#pragma once

namespace gpreli {

// Parses argv and runs one subcommand (kernel-eval, fit, predict, power,
// reliability, experiment). Returns the process exit code: 0 success,
// 1 usage/config error (message on stderr), 2 numerical/conditioning error
// with the offending parameters echoed.
int parse_and_dispatch(int argc, const char* const* argv);

} // namespace gpreli
