// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ria/rational.hpp"

namespace ria {

struct DofPlan {
  int m = 0;
  int n = 0;
  std::int64_t b = 0;
  std::array<std::int64_t, 4> s{};
  std::int64_t tau = 0;
  Rational dof;

  bool operator==(const DofPlan&) const = default;
};

// Plan for fixed (S1,S2,S3) with b at its largest feasible value, or nothing if
// no b >= 1 is feasible.
std::optional<DofPlan> plan_for(int m, int n, std::int64_t s1, std::int64_t s2, std::int64_t s3);

// Names of the violated constraints (empty when the plan is feasible). Integer
// arithmetic only.
std::vector<std::string> check_constraints(const DofPlan& plan);

// Exhaustive search over 1 <= S1,S2,S3 <= s_max; largest dof, then smallest tau,
// then lexicographically smallest (S1,S2,S3). Throws SearchExhausted.
DofPlan optimize(int m, int n, int s_max = 64);

inline constexpr int kDefaultSmax = 64;

struct Thresholds {
  double rho_a = 0.0;
  double rho_b = 0.0;
  double rho_c = 0.0;
};

// Bisection roots (to 1e-10) of 2r^3-3r^2-3r-8, r^3-r^2-3r-12 and r^2-r-9.
Thresholds thresholds();

// Polynomial with integer coefficients, lowest degree first.
struct Polynomial {
  std::vector<std::int64_t> c;

  double operator()(double x) const;
  Rational operator()(const Rational& x) const;
};

// Unique real root in [lo, hi] of a polynomial that changes sign there.
double bisect(const Polynomial& p, double lo, double hi, double tol = 1e-10);

struct RationalFunction {
  Polynomial num;
  Polynomial den;

  double operator()(double x) const { return num(x) / den(x); }
  Rational operator()(const Rational& x) const { return num(x) / den(x); }
};

// A breakpoint is either an exact rational or the root of a polynomial that is
// negative just below it and non-negative from it on.
struct Breakpoint {
  double value = 0.0;
  std::optional<Rational> exact;
  Polynomial root_of;

  bool at_or_below(const Rational& x) const;  // breakpoint <= x
};

// Piece k applies on [breaks[k], breaks[k+1]); the last piece extends to infinity.
// Below breaks[0] the curve is undefined.
class PiecewiseCurve {
 public:
  PiecewiseCurve(std::vector<Breakpoint> breaks, std::vector<RationalFunction> pieces);

  std::optional<double> operator()(double rho) const;
  std::optional<Rational> exact(const Rational& rho) const;

  const std::vector<Breakpoint>& breakpoints() const { return breaks_; }
  const std::vector<RationalFunction>& pieces() const { return pieces_; }

 private:
  std::vector<Breakpoint> breaks_;
  std::vector<RationalFunction> pieces_;
};

const PiecewiseCurve& theorem1_curve();
const PiecewiseCurve& previous_inner_curve();
const PiecewiseCurve& outer_bound_curve();
const PiecewiseCurve& no_csit_curve();

// Throws std::domain_error below rho_A.
double theorem1(double rho);
Rational theorem1_exact(const Rational& rho);

// Throw std::domain_error for rho <= 0.
double previous_inner(double rho);
double outer_bound(double rho);
double no_csit(double rho);

struct SweepRow {
  double rho = 0.0;
  std::optional<double> proposed;  // undefined below rho_A
  double previous = 0.0;
  double outer = 0.0;
  double no_csit = 0.0;
};

// Grid rho_start + k step up to rho_end (inclusive within 1e-9 step); every grid
// value is rounded to 12 significant digits before evaluation.
std::vector<SweepRow> sweep(double rho_start, double rho_end, double step);

// "%.12g", with ".0" appended to integral values.
std::string format_sig12(double v);

// Header "rho,proposed,previous,outer,no_csit"; empty field for undefined values.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace ria
