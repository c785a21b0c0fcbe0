// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "volcount/driver.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return volcount::run_cli(args, std::cout, std::cerr);
}
