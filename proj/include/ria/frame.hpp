// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "ria/types.hpp"

namespace ria {

// Users are 1..4; BS c(u) = ceil(u / 2) serves users {1,2} and {3,4}.
inline int cell_of(int user) { return (user + 1) / 2; }
int cellmate(int user);

enum class RoundRole { kServing, kListening, kMixed };

const char* to_string(RoundRole role);

using UserSet = std::vector<int>;  // ascending

// Four-phase frame: phase p has binomial(4, p) rounds of S_p slots each; round r
// of phase p serves the r-th p-subset of {1,2,3,4} in lexicographic order.
// Immutable after construction.
class FrameConfig {
 public:
  explicit FrameConfig(const std::array<int, kNumPhases>& slots);

  int slots(int phase) const;
  int rounds(int phase) const;
  const UserSet& served(int phase, int round) const;
  bool is_served(int phase, int round, int user) const;

  // Round of `phase` whose served set equals `users` (any order).
  int round_of(int phase, UserSet users) const;

  // The unique phase-3 round in which `user` is not served.
  int listening_round_phase3(int user) const;

  const std::array<int, kNumPhases>& slot_counts() const { return slots_; }
  int total_slots() const;

  // All rounds in transmission order.
  std::vector<RoundId> all_rounds() const;

  bool operator==(const FrameConfig& other) const { return slots_ == other.slots_; }

 private:
  void check_round(int phase, int round) const;

  std::array<int, kNumPhases> slots_;
  std::array<std::vector<UserSet>, kNumPhases> served_;
};

// Validating constructor; throws std::invalid_argument on a slot count < 1.
FrameConfig build_frame(const std::array<int, kNumPhases>& slots);

// tau = sum_p R_p * S_p = 4 S1 + 6 S2 + 4 S3 + S4.
int total_slots(const FrameConfig& frame);

RoundRole round_role(const FrameConfig& frame, int phase, int round, int user);

// The slot counts of the (M, N) = (4, 1) scheme.
inline constexpr std::array<int, kNumPhases> kSchemeSlots = {3, 1, 1, 6};
inline constexpr int kSchemeSymbols = 12;  // b

}  // namespace ria
