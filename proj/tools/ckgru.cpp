// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "ckgru/app/cli.hpp"

int main(int argc, char **argv) {
  return ckgru::run_cli(argc, argv, std::cout, std::cerr);
}
