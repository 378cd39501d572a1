#pragma once

namespace seqvar {

// Full command-line driver (subcommands: test, sweep, synth).
// Exit codes: 0 decisive or not-significant verdict, 1 usage/input error,
// 2 undecided (budget exhausted).
int run_cli(int argc, const char* const* argv);

}  // namespace seqvar
