// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "ria/dofplan.hpp"
#include "ria/types.hpp"

using namespace ria;

namespace {

// Brute force over b as well as (S1,S2,S3), constraints written out directly
// with rational S4. Same ordering: dof, then tau, then (S1,S2,S3).
std::optional<DofPlan> brute_force(int m, int n, int s_max) {
  std::optional<DofPlan> best;
  for (std::int64_t s1 = 1; s1 <= s_max; ++s1) {
    for (std::int64_t s2 = 1; s2 <= s_max; ++s2) {
      for (std::int64_t s3 = 1; s3 <= s_max; ++s3) {
        if (m * s2 < n * s1 || m * s3 < 2 * n * s2) continue;
        for (std::int64_t b = 1; b <= 4 * n * s1; ++b) {
          if (m * s1 < b) break;
          if (n * (s1 + 3 * s2 + 6 * std::min(s2, s3)) < b) break;
          const Rational slack = Rational(b, n) - Rational(s1 + 3 * s2);
          const std::int64_t s4 = std::min<std::int64_t>(6 * s2, slack.ceil());
          if (s4 < 1) continue;
          const std::int64_t tau = 4 * s1 + 6 * s2 + 4 * s3 + s4;
          const DofPlan p{m, n, b, {s1, s2, s3, s4}, tau, Rational(b, n * tau)};
          if (!best || p.dof > best->dof || (p.dof == best->dof && p.tau < best->tau)) best = p;
        }
      }
    }
  }
  return best;
}

DofPlan golden(int m, int n, std::int64_t b, std::array<std::int64_t, 4> s, std::int64_t tau,
               Rational dof) {
  return {m, n, b, s, tau, dof};
}

}  // namespace

TEST_CASE("(4,1) gives the scheme parameters") {
  CHECK(optimize(4, 1) == golden(4, 1, 12, {3, 1, 1, 6}, 28, Rational(3, 7)));
}

TEST_CASE("frozen goldens at s_max = 64") {
  CHECK(optimize(3, 1) == golden(3, 1, 27, {9, 3, 2, 9}, 71, Rational(27, 71)));
  CHECK(optimize(8, 2) == golden(8, 2, 24, {3, 1, 1, 6}, 28, Rational(3, 7)));
  CHECK(optimize(13, 4) == golden(13, 4, 416, {32, 10, 7, 42}, 258, Rational(52, 129)));
  CHECK(optimize(18, 5) == golden(18, 5, 810, {45, 13, 13, 78}, 388, Rational(81, 194)));
  CHECK(optimize(7, 2) == golden(7, 2, 336, {48, 14, 13, 78}, 406, Rational(12, 29)));
  CHECK(optimize(16, 5) == golden(16, 5, 765, {48, 15, 10, 60}, 382, Rational(153, 382)));
  CHECK(optimize(11, 3) == golden(11, 3, 297, {27, 8, 8, 48}, 236, Rational(99, 236)));
}

TEST_CASE("planner agrees with a brute-force search over b") {
  for (int m = 1; m <= 9; ++m) {
    for (int n = 1; n <= 4; ++n) {
      const auto bf = brute_force(m, n, 10);
      if (!bf) {
        CHECK_THROWS_AS(optimize(m, n, 10), SearchExhausted);
        continue;
      }
      CAPTURE(m);
      CAPTURE(n);
      CHECK(optimize(m, n, 10) == *bf);
    }
  }
}

TEST_CASE("returned plans satisfy every constraint in integers") {
  for (int m = 1; m <= 12; ++m) {
    for (int n = 1; n <= 4; ++n) {
      try {
        const DofPlan p = optimize(m, n, 24);
        CAPTURE(m);
        CAPTURE(n);
        CHECK(check_constraints(p).empty());
      } catch (const SearchExhausted&) {
      }
    }
  }
  DofPlan bad = optimize(4, 1);
  bad.b = 13;
  CHECK_FALSE(check_constraints(bad).empty());
}

TEST_CASE("closed-form pairs agree exactly") {
  for (auto [m, n] : {std::pair{4, 1}, {3, 1}, {8, 2}, {18, 5}, {11, 3}}) {
    CAPTURE(m);
    CAPTURE(n);
    CHECK(optimize(m, n).dof == theorem1_exact(Rational(m, n)));
  }
}

TEST_CASE("branch-2 ratios reach the bound once the search bound allows it") {
  CHECK(optimize(7, 2, 84) == golden(7, 2, 588, {84, 24, 23, 138}, 710, Rational(147, 355)));
  CHECK(optimize(7, 2, 84).dof == theorem1_exact(Rational(7, 2)));
  CHECK(optimize(13, 4, 104).dof == Rational(169, 419));
  CHECK(optimize(13, 4, 104).dof == theorem1_exact(Rational(13, 4)));
  const DofPlan p = optimize(16, 5, 480);
  CHECK(p == golden(16, 5, 7680, {480, 150, 101, 606}, 3830, Rational(768, 1915)));
  CHECK(p.dof == theorem1_exact(Rational(16, 5)));
}

TEST_CASE("planner never exceeds the closed form on [rho_A, 8]") {
  int pairs = 0;
  const double rho_a = thresholds().rho_a;
  for (int n = 1; n <= 5; ++n) {
    for (int m = 1; m <= 8 * n; ++m) {
      if (std::gcd(m, n) != 1 || static_cast<double>(m) / n < rho_a) continue;
      ++pairs;
      CAPTURE(m);
      CAPTURE(n);
      CHECK(optimize(m, n).dof <= theorem1_exact(Rational(m, n)));
    }
  }
  CHECK(pairs >= 15);
}

TEST_CASE("search exhaustion and bad input") {
  CHECK_THROWS_AS(optimize(1, 5, 2), SearchExhausted);
  CHECK_THROWS_AS(optimize(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(optimize(4, 1, 0), std::invalid_argument);
}

TEST_CASE("thresholds") {
  const Thresholds t = thresholds();
  CHECK(std::abs(t.rho_a - 2.6413) < 1e-4);
  CHECK(std::abs(t.rho_b - 3.1557) < 1e-4);
  CHECK(std::abs(t.rho_c - 3.5414) < 1e-4);
  CHECK(std::abs(t.rho_c - (1.0 + std::sqrt(37.0)) / 2.0) < 1e-9);
  // rho_A is where branch 1 meets 1/3, rho_B where branches 1 and 2 meet.
  const double r = t.rho_a;
  CHECK(std::abs(r * r * r / (r * r * r + 3 * r * r + 3 * r + 8) - 1.0 / 3.0) < 1e-9);
  // The stated 3.2196 is not a crossing of the two branches.
  const auto b1 = [](double x) { return x * x * x / (x * x * x + 3 * x * x + 3 * x + 8); };
  const auto b2 = [](double x) { return 3 * x * x / (5 * x * x + 7 * x + 3); };
  CHECK(std::abs(b1(t.rho_b) - b2(t.rho_b)) < 1e-9);
  CHECK(std::abs(b1(3.2196) - b2(3.2196)) > 1e-4);
}

TEST_CASE("theorem1 values and continuity") {
  const Thresholds t = thresholds();
  CHECK(theorem1_exact(Rational(4)) == Rational(3, 7));
  CHECK(theorem1_exact(Rational(3)) == Rational(27, 71));
  CHECK(theorem1(3.0) == doctest::Approx(0.38028).epsilon(1e-5));
  // 9 rho/(16 rho + 20) at (1 + sqrt 37)/2; the figure's vertex label reads 0.4143.
  const double rc = (1.0 + std::sqrt(37.0)) / 2.0;
  CHECK(theorem1(t.rho_c) == doctest::Approx(9 * rc / (16 * rc + 20)).epsilon(1e-9));
  CHECK(std::abs(theorem1(t.rho_c) - 0.41576) < 1e-5);
  CHECK(theorem1(100.0) == doctest::Approx(3.0 / 7.0));
  CHECK_THROWS_AS(theorem1(2.5), std::domain_error);
  CHECK_THROWS_AS(theorem1_exact(Rational(5, 2)), std::domain_error);
  const auto& c = theorem1_curve();
  const auto& pc = c.pieces();
  CHECK(std::abs(pc[0](t.rho_b) - pc[1](t.rho_b)) < 1e-9);
  CHECK(std::abs(pc[1](t.rho_c) - pc[2](t.rho_c)) < 1e-9);
  CHECK(pc[2](Rational(4)) == Rational(3, 7));
}

TEST_CASE("comparison curves") {
  CHECK(previous_inner_curve().exact(Rational(2)) == Rational(1, 3));
  CHECK(previous_inner_curve().exact(Rational(3)) == Rational(3, 8));
  CHECK(previous_inner_curve().exact(Rational(4)) == Rational(2, 5));
  CHECK(previous_inner_curve().exact(Rational(3, 2)) == Rational(3, 10));
  CHECK(outer_bound_curve().exact(Rational(2)) == Rational(12, 25));
  CHECK(outer_bound_curve().exact(Rational(1)) == Rational(1, 3));
  CHECK(outer_bound_curve().exact(Rational(3, 2)) == Rational(6, 13));
  CHECK(no_csit_curve().exact(Rational(1)) == Rational(1, 4));
  CHECK(no_csit(0.4) == doctest::Approx(0.2));
  CHECK(no_csit(100.0) == 0.25);
  CHECK_THROWS_AS(previous_inner(0.0), std::domain_error);
  CHECK_THROWS_AS(outer_bound(-1.0), std::domain_error);
}

TEST_CASE("outer bound is continuous at every breakpoint") {
  const auto& c = outer_bound_curve();
  for (std::size_t k = 1; k < c.breakpoints().size(); ++k) {
    const Rational at = *c.breakpoints()[k].exact;
    CHECK(c.pieces()[k - 1](at) == c.pieces()[k](at));
  }
}

TEST_CASE("sweep grid and CSV") {
  const auto rows = sweep(0.25, 4.5, 0.05);
  CHECK(rows.size() == 86);
  const double rho_a = thresholds().rho_a;
  std::optional<double> last;
  for (const auto& r : rows) {
    CHECK(r.previous <= r.outer + 1e-12);
    CHECK(r.no_csit <= r.previous + 1e-12);
    if (r.rho < rho_a) {
      CHECK_FALSE(r.proposed.has_value());
    } else {
      REQUIRE(r.proposed.has_value());
      CHECK(*r.proposed >= r.previous - 1e-12);
      CHECK(*r.proposed <= r.outer + 1e-12);
      if (last) CHECK(*r.proposed >= *last);
      last = r.proposed;
    }
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("rho,proposed,previous,outer,no_csit\n", 0) == 0);
  CHECK(csv.find("\n4.0,0.428571428571,0.4,0.48,0.25\n") != std::string::npos);
  CHECK(csv.find("\n0.25,,0.125,0.125,0.125\n") != std::string::npos);
  CHECK_THROWS_AS(sweep(1.0, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(sweep(0.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(sweep(1.0, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("number formatting") {
  CHECK(format_sig12(4.0) == "4.0");
  CHECK(format_sig12(3.0 / 7.0) == "0.428571428571");
  CHECK(format_sig12(0.1 + 0.2) == "0.3");
  CHECK(format_sig12(1e-20) == "1e-20");
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(3, 7).str() == "3/7");
  CHECK(Rational(5).str() == "5");
  CHECK(Rational(1, 3) < Rational(3, 8));
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(INT64_MAX) * Rational(2));
}
