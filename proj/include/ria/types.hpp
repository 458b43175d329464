// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ria {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;

inline constexpr int kNumUsers = 4;
inline constexpr int kNumPhases = 4;
inline constexpr int kNumCells = 2;

// A round of the frame, 1-based on both axes.
struct RoundId {
  int phase = 0;
  int round = 0;
  auto operator<=>(const RoundId&) const = default;
};

// Raised by a CsitView when a transmitter asks for a channel it cannot know yet.
class CsitViolation : public std::logic_error {
 public:
  CsitViolation(int view_phase, int requested_phase, std::string op)
      : std::logic_error("CSIT violation in '" + op + "': channel of phase " +
                         std::to_string(requested_phase) +
                         " requested while building phase " + std::to_string(view_phase)),
        view_phase_(view_phase),
        requested_phase_(requested_phase) {}

  int view_phase() const { return view_phase_; }
  int requested_phase() const { return requested_phase_; }

 private:
  int view_phase_;
  int requested_phase_;
};

// The receiver could not produce enough interference-free combinations.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scheme invariant (alignment, coupling) did not hold on the received data.
class SchemeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive planner search found nothing feasible below the bound.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ria
