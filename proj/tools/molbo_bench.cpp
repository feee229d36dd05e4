//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "molbo/cli.h"

int main(int argc, char **argv) {
  return molbo::run_bench_cli({ argv + 1, argv + argc }, std::cout, std::cerr);
}
