// SPDX-License-Identifier: Apache-2.0

#include "ria/frame.hpp"

#include <algorithm>
#include <string>

namespace ria {

namespace {

void check_user(int user) {
  if (user < 1 || user > kNumUsers) {
    throw std::out_of_range("user index " + std::to_string(user) + " outside 1..4");
  }
}

void check_phase(int phase) {
  if (phase < 1 || phase > kNumPhases) {
    throw std::out_of_range("phase index " + std::to_string(phase) + " outside 1..4");
  }
}

// p-subsets of {1..n} in lexicographic order.
void subsets(int n, int p, int start, UserSet& current, std::vector<UserSet>& out) {
  if (static_cast<int>(current.size()) == p) {
    out.push_back(current);
    return;
  }
  for (int u = start; u <= n; ++u) {
    current.push_back(u);
    subsets(n, p, u + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

int cellmate(int user) {
  check_user(user);
  return user % 2 == 1 ? user + 1 : user - 1;
}

const char* to_string(RoundRole role) {
  switch (role) {
    case RoundRole::kServing:
      return "serving";
    case RoundRole::kListening:
      return "listening";
    case RoundRole::kMixed:
      return "mixed";
  }
  return "?";
}

FrameConfig::FrameConfig(const std::array<int, kNumPhases>& slots) : slots_(slots) {
  for (int p = 1; p <= kNumPhases; ++p) {
    if (slots_[p - 1] < 1) {
      throw std::invalid_argument("slot count S" + std::to_string(p) + " = " +
                                  std::to_string(slots_[p - 1]) + " must be >= 1");
    }
    UserSet scratch;
    subsets(kNumUsers, p, 1, scratch, served_[p - 1]);
  }
}

void FrameConfig::check_round(int phase, int round) const {
  check_phase(phase);
  if (round < 1 || round > rounds(phase)) {
    throw std::out_of_range("round " + std::to_string(round) + " outside 1.." +
                            std::to_string(rounds(phase)) + " for phase " + std::to_string(phase));
  }
}

int FrameConfig::slots(int phase) const {
  check_phase(phase);
  return slots_[phase - 1];
}

int FrameConfig::rounds(int phase) const {
  check_phase(phase);
  return static_cast<int>(served_[phase - 1].size());
}

const UserSet& FrameConfig::served(int phase, int round) const {
  check_round(phase, round);
  return served_[phase - 1][round - 1];
}

bool FrameConfig::is_served(int phase, int round, int user) const {
  check_user(user);
  const auto& s = served(phase, round);
  return std::find(s.begin(), s.end(), user) != s.end();
}

int FrameConfig::round_of(int phase, UserSet users) const {
  check_phase(phase);
  std::sort(users.begin(), users.end());
  const auto& sets = served_[phase - 1];
  auto it = std::find(sets.begin(), sets.end(), users);
  if (it == sets.end()) throw std::out_of_range("no round serves that user set");
  return static_cast<int>(it - sets.begin()) + 1;
}

int FrameConfig::listening_round_phase3(int user) const {
  check_user(user);
  for (int r = 1; r <= rounds(3); ++r) {
    if (!is_served(3, r, user)) return r;
  }
  throw std::logic_error("every phase-3 round serves the user");
}

int FrameConfig::total_slots() const {
  int tau = 0;
  for (int p = 1; p <= kNumPhases; ++p) tau += rounds(p) * slots(p);
  return tau;
}

std::vector<RoundId> FrameConfig::all_rounds() const {
  std::vector<RoundId> out;
  for (int p = 1; p <= kNumPhases; ++p) {
    for (int r = 1; r <= rounds(p); ++r) out.push_back({p, r});
  }
  return out;
}

FrameConfig build_frame(const std::array<int, kNumPhases>& slots) { return FrameConfig(slots); }

int total_slots(const FrameConfig& frame) { return frame.total_slots(); }

RoundRole round_role(const FrameConfig& frame, int phase, int round, int user) {
  if (!frame.is_served(phase, round, user)) return RoundRole::kListening;
  // In phase 3 the two interferers' pair term only cancels when both come from
  // the other BS, i.e. when the cell-mate sits the round out.
  if (phase == 3 && frame.is_served(phase, round, cellmate(user))) return RoundRole::kMixed;
  return RoundRole::kServing;
}

}  // namespace ria
