// SPDX-License-Identifier: Apache-2.0

#include "ria/dofplan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ria/types.hpp"

namespace ria {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

bool better(const DofPlan& a, const DofPlan& b) {
  if (a.dof != b.dof) return a.dof > b.dof;
  return a.tau < b.tau;  // scan order already gives the lexicographic tie-break
}

}  // namespace

std::optional<DofPlan> plan_for(int m, int n, std::int64_t s1, std::int64_t s2, std::int64_t s3) {
  if (m < 1 || n < 1 || s1 < 1 || s2 < 1 || s3 < 1) return std::nullopt;
  if (m * s2 < n * s1 || m * s3 < 2 * n * s2) return std::nullopt;
  const std::int64_t b =
      std::min({m * s1, 4 * n * s1, n * (s1 + 3 * s2 + 6 * std::min(s2, s3))});
  if (b < 1) return std::nullopt;
  const std::int64_t s4 = std::min(6 * s2, ceil_div(b - n * (s1 + 3 * s2), n));
  if (s4 < 1) return std::nullopt;
  DofPlan p;
  p.m = m;
  p.n = n;
  p.b = b;
  p.s = {s1, s2, s3, s4};
  p.tau = 4 * s1 + 6 * s2 + 4 * s3 + s4;
  p.dof = Rational(b, n * p.tau);
  return p;
}

std::vector<std::string> check_constraints(const DofPlan& p) {
  std::vector<std::string> bad;
  const std::int64_t m = p.m, n = p.n, b = p.b;
  const auto [s1, s2, s3, s4] = p.s;
  if (m < 1 || n < 1 || b < 1) bad.emplace_back("positive M, N, b");
  if (s1 < 1 || s2 < 1 || s3 < 1 || s4 < 1) bad.emplace_back("positive slot counts");
  if (m * s1 < b) bad.emplace_back("transmit rank in phase 1 (M S1 >= b)");
  if (4 * n * s1 < b) bad.emplace_back("enough phase-1 LCs (4N S1 >= b)");
  if (m * s2 < n * s1) bad.emplace_back("transmit rank in phase 2 (M S2 >= N S1)");
  if (m * s3 < 2 * n * s2) bad.emplace_back("transmit rank in phase 3 (M S3 >= 2N S2)");
  if (n * (s1 + 3 * s2 + 6 * std::min(s2, s3)) < b) {
    bad.emplace_back("enough LCs for the whole communication");
  }
  if (n > 0 && s4 != std::min(6 * s2, ceil_div(b - n * (s1 + 3 * s2), n))) {
    bad.emplace_back("S4 closed form");
  }
  if (p.tau != 4 * s1 + 6 * s2 + 4 * s3 + s4) bad.emplace_back("tau = 4S1 + 6S2 + 4S3 + S4");
  if (n > 0 && p.tau > 0 && p.dof != Rational(b, n * p.tau)) bad.emplace_back("dof = b/(N tau)");
  return bad;
}

DofPlan optimize(int m, int n, int s_max) {
  if (m < 1 || n < 1) throw std::invalid_argument("optimize: M and N must be >= 1");
  if (s_max < 1) throw std::invalid_argument("optimize: s_max must be >= 1");
  std::optional<DofPlan> best;
  for (std::int64_t s1 = 1; s1 <= s_max; ++s1) {
    for (std::int64_t s2 = 1; s2 <= s_max; ++s2) {
      for (std::int64_t s3 = 1; s3 <= s_max; ++s3) {
        const auto p = plan_for(m, n, s1, s2, s3);
        if (p && (!best || better(*p, *best))) best = p;
      }
    }
  }
  if (!best) {
    throw SearchExhausted("search bound exhausted: no feasible plan for (M,N) = (" +
                          std::to_string(m) + "," + std::to_string(n) + ") with s_max = " +
                          std::to_string(s_max));
  }
  return *best;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + static_cast<double>(*it);
  return acc;
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

double bisect(const Polynomial& p, double lo, double hi, double tol) {
  double flo = p(lo);
  if (flo == 0.0) return lo;
  if (p(hi) == 0.0) return hi;
  if ((flo < 0.0) == (p(hi) < 0.0)) throw std::invalid_argument("bisect: no sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

const Polynomial kPolyA{{-8, -3, -3, 2}};
const Polynomial kPolyB{{-12, -3, -1, 1}};
const Polynomial kPolyC{{-9, -1, 1}};

Breakpoint rational_break(std::int64_t num, std::int64_t den) {
  return {static_cast<double>(num) / static_cast<double>(den), Rational(num, den), {}};
}

Breakpoint root_break(const Polynomial& p, double root) { return {root, std::nullopt, p}; }

RationalFunction rf(std::vector<std::int64_t> num, std::vector<std::int64_t> den) {
  return {{std::move(num)}, {std::move(den)}};
}

}  // namespace

Thresholds thresholds() {
  return {bisect(kPolyA, 2.0, 3.0), bisect(kPolyB, 3.0, 4.0), bisect(kPolyC, 3.0, 4.0)};
}

bool Breakpoint::at_or_below(const Rational& x) const {
  if (exact) return *exact <= x;
  // The polynomial is increasing through its single positive root.
  return root_of(x) >= Rational(0) && x > Rational(0);
}

PiecewiseCurve::PiecewiseCurve(std::vector<Breakpoint> breaks, std::vector<RationalFunction> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (breaks_.empty() || breaks_.size() != pieces_.size()) {
    throw std::invalid_argument("PiecewiseCurve: one breakpoint per piece");
  }
  for (std::size_t k = 1; k < breaks_.size(); ++k) {
    if (!(breaks_[k - 1].value < breaks_[k].value)) {
      throw std::invalid_argument("PiecewiseCurve: breakpoints must increase");
    }
  }
}

std::optional<double> PiecewiseCurve::operator()(double rho) const {
  if (rho < breaks_.front().value) return std::nullopt;
  std::size_t k = 0;
  while (k + 1 < breaks_.size() && rho >= breaks_[k + 1].value) ++k;
  return pieces_[k](rho);
}

std::optional<Rational> PiecewiseCurve::exact(const Rational& rho) const {
  if (!breaks_.front().at_or_below(rho)) return std::nullopt;
  std::size_t k = 0;
  while (k + 1 < breaks_.size() && breaks_[k + 1].at_or_below(rho)) ++k;
  return pieces_[k](rho);
}

const PiecewiseCurve& theorem1_curve() {
  static const PiecewiseCurve curve = [] {
    const Thresholds t = thresholds();
    return PiecewiseCurve(
        {root_break(kPolyA, t.rho_a), root_break(kPolyB, t.rho_b), root_break(kPolyC, t.rho_c),
         rational_break(4, 1)},
        {rf({0, 0, 0, 1}, {8, 3, 3, 1}), rf({0, 0, 3}, {3, 7, 5}), rf({0, 9}, {20, 16}),
         rf({3}, {7})});
  }();
  return curve;
}

const PiecewiseCurve& previous_inner_curve() {
  static const PiecewiseCurve curve(
      {rational_break(0, 1), rational_break(1, 2), rational_break(1, 1), rational_break(2, 1),
       rational_break(3, 1), rational_break(4, 1)},
      {rf({0, 1}, {2}), rf({1}, {4}), rf({0, 1}, {2, 2}), rf({1}, {3}), rf({3}, {8}),
       rf({2}, {5})});
  return curve;
}

const PiecewiseCurve& outer_bound_curve() {
  static const PiecewiseCurve curve(
      {rational_break(0, 1), rational_break(1, 2), rational_break(3, 4), rational_break(1, 1),
       rational_break(4, 3), rational_break(3, 2), rational_break(2, 1)},
      {rf({0, 1}, {2}), rf({0, 2}, {3, 2}), rf({1}, {3}), rf({0, 1}, {3}), rf({0, 2}, {2, 3}),
       rf({0, 6}, {3, 11}), rf({12}, {25})});
  return curve;
}

const PiecewiseCurve& no_csit_curve() {
  static const PiecewiseCurve curve({rational_break(0, 1), rational_break(1, 2)},
                                    {rf({0, 1}, {2}), rf({1}, {4})});
  return curve;
}

double theorem1(double rho) {
  const auto v = theorem1_curve()(rho);
  if (!v) throw std::domain_error("theorem1: rho below rho_A");
  return *v;
}

Rational theorem1_exact(const Rational& rho) {
  const auto v = theorem1_curve().exact(rho);
  if (!v) throw std::domain_error("theorem1: rho below rho_A");
  return *v;
}

namespace {

double positive_curve(const PiecewiseCurve& c, double rho, const char* name) {
  if (!(rho > 0.0)) throw std::domain_error(std::string(name) + ": rho must be positive");
  return *c(rho);
}

}  // namespace

double previous_inner(double rho) { return positive_curve(previous_inner_curve(), rho, "previous_inner"); }
double outer_bound(double rho) { return positive_curve(outer_bound_curve(), rho, "outer_bound"); }
double no_csit(double rho) { return positive_curve(no_csit_curve(), rho, "no_csit"); }

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::vector<SweepRow> sweep(double rho_start, double rho_end, double step) {
  if (!(rho_start > 0.0) || !(rho_end > rho_start) || !(step > 0.0)) {
    throw std::invalid_argument("sweep: need 0 < rho_start < rho_end and step > 0");
  }
  const auto count = static_cast<std::int64_t>(std::floor((rho_end - rho_start) / step + 1e-9));
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(count + 1));
  for (std::int64_t k = 0; k <= count; ++k) {
    const double rho = std::stod(format_sig12(rho_start + static_cast<double>(k) * step));
    rows.push_back({rho, theorem1_curve()(rho), previous_inner(rho), outer_bound(rho), no_csit(rho)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "rho,proposed,previous,outer,no_csit\n";
  for (const auto& r : rows) {
    os << format_sig12(r.rho) << ',' << (r.proposed ? format_sig12(*r.proposed) : "") << ','
       << format_sig12(r.previous) << ',' << format_sig12(r.outer) << ','
       << format_sig12(r.no_csit) << '\n';
  }
}

}  // namespace ria
