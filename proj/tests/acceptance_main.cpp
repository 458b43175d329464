// SPDX-License-Identifier: Apache-2.0

// One line per acceptance criterion; exit status 1 if any of them fails.

#include <iostream>

#include "ria/acceptance.hpp"

int main() {
  const auto results = ria::run_acceptance();
  ria::print_acceptance(std::cout, results);
  return ria::all_pass(results) ? 0 : 1;
}
