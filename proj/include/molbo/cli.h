//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_CLI_H_
#define MOLBO_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "molbo/error.h"

namespace molbo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNotFound = 3;
inline constexpr int kExitSolver = 4;

int exit_code_for(ErrorCode code);

/// `molbo` entry point: subcommands dist, gram, optimize, explore, analyze
/// and recipe. `args` excludes the program name. Results go to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// `molbo_bench` entry point.
int run_bench_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace molbo

#endif  // MOLBO_CLI_H_
