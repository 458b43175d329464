// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ria/precoding.hpp"

namespace ria {

struct AcceptanceOptions {
  std::uint64_t trials = 100;
  std::uint64_t base_seed = 0;
  double tol = 1e-8;
  unsigned threads = 0;
  int s_max = 64;
  FaultInjection fault = FaultInjection::kNone;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string expected;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

// One line per criterion: "[PASS] 1 name | measured: ... | expected: ...".
void print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results);

bool all_pass(const std::vector<CriterionResult>& results);

// Planner pairs checked against the closed-form bound.
struct PlannerPair {
  int m;
  int n;
};
inline constexpr PlannerPair kPlannerPairs[] = {{4, 1},  {3, 1}, {8, 2},  {13, 4},
                                                {18, 5}, {7, 2}, {16, 5}, {11, 3}};

}  // namespace ria
