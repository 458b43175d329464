// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "ria/channel.hpp"
#include "ria/frame.hpp"

namespace ria {

enum class OhiKind { kT, kTilde, kW };

// Identity of an overheard-interference row.
//   T_{owner,symbol}            phase-1 signal of `symbol` seen at `owner` (3 rows)
//   t~^(observer)_{owner,symbol} phase-2 LC of T_{owner,symbol} seen at `observer`
//   W_{owner,symbol}            phase-3 signal of `symbol` seen at `owner` while it listens
struct RowLabel {
  OhiKind kind = OhiKind::kT;
  int owner = 0;
  int symbol = 0;
  int observer = 0;  // t~ rows only

  static RowLabel T(int owner, int symbol) { return {OhiKind::kT, owner, symbol, 0}; }
  static RowLabel tilde(int observer, int owner, int symbol) {
    return {OhiKind::kTilde, owner, symbol, observer};
  }
  static RowLabel W(int owner, int symbol) { return {OhiKind::kW, owner, symbol, 0}; }

  auto operator<=>(const RowLabel&) const = default;
  std::string str() const;
};

struct OhiRow {
  RowLabel label;
  CMatrix rows;
};

// Random combining coefficients shared by the designs of phases 2-4.
struct MixCoefficients {
  std::map<std::pair<int, int>, CMatrix> phase2;  // (user, round) -> Sigma_i^(2,r), M x N S1
  std::array<std::array<CVector, 3>, 4> phase3;   // [round-1][k-1] -> sigma_k^(3,r), M x 1
  std::array<CVector, 4> phase4;                  // [m-1] -> Sigma_m^(4), M S4 x 1

  static MixCoefficients draw(std::uint64_t seed, const FrameConfig& frame, int m);
};

// V_i^(p,r) for every user and round; zero for users a round does not serve.
class PrecoderSet {
 public:
  PrecoderSet(const FrameConfig& frame, int m, int b);

  const CMatrix& V(int user, int phase, int round) const;
  void set(int user, int phase, int round, CMatrix v);

  // Scale every served precoder of the round by one common factor so that the
  // largest column norm in the round is 1.
  void normalize_round(int phase, int round);

  const FrameConfig& frame() const { return frame_; }
  int m() const { return m_; }
  int b() const { return b_; }

 private:
  FrameConfig frame_;
  int m_;
  int b_;
  std::map<std::pair<int, RoundId>, CMatrix> v_;
};

// sigma_k^(3,r) applied to one t~ row.
struct Phase3Term {
  int sigma = 0;
  RowLabel row;
};

// Pairing rule of the phase-3 design: with A^(3,r) = {a,b,c}, sigma_1 carries the
// coupled pair {a,b} known at c, sigma_2 the pair {a,c} known at b, sigma_3 the
// pair {b,c} known at a. Returns the two terms of `user` in sigma order.
std::array<Phase3Term, 2> phase3_terms(const UserSet& served, int user);

// W rows combined by V_i^(4): W_{I^i(k), i} for k = 1..3, where I^i = {1..4} \ {i}.
std::array<RowLabel, 3> phase4_terms(int user);

enum class FaultInjection {
  kNone,
  kPhase2SameStageCsi,  // phase-2 builder peeks at a phase-2 channel
  kPhase3SignFlip,      // third served user's pair term enters with the wrong sign
};

FaultInjection parse_fault(const std::string& name);

// Predefined phase-1 precoders V_i^(1,i): random b x b, unit-norm columns.
std::array<CMatrix, kNumUsers> phase1_precoders(std::uint64_t seed, int b = kSchemeSymbols);

// T_{j,i} = H_{j,c(i)}^(1,i) V_i^(1,i).
OhiRow compute_T(const CsitView& csit, const PrecoderSet& precoders, int j, int i);

// V_i^(2,r) = Sigma_i^(2,r) T_{j,i} for A^(2,r) = {i,j}; stored into `precoders`.
void phase2_precoders(const std::map<RowLabel, CMatrix>& t_blocks, const MixCoefficients& mix,
                      PrecoderSet& precoders);

// All 24 t~^(k)_{j,i} = h_{k,c(i)}^(2,r) V_i^(2,r) with k outside A^(2,r) = {i,j}.
std::map<RowLabel, CMatrix> compute_t_rows(const CsitView& csit, const PrecoderSet& precoders);

void phase3_precoders(const std::map<RowLabel, CMatrix>& t_rows, const MixCoefficients& mix,
                      PrecoderSet& precoders, FaultInjection fault = FaultInjection::kNone);

// All 12 W_{j,i} = h_{j,c(i)}^(3,r) V_i^(3,r), r the phase-3 round j listens to.
std::map<RowLabel, CMatrix> compute_W_rows(const CsitView& csit, const PrecoderSet& precoders);

void phase4_precoders(const std::map<RowLabel, CMatrix>& w_rows, const MixCoefficients& mix,
                      PrecoderSet& precoders);

struct PrecoderBuild {
  PrecoderSet precoders;
  MixCoefficients mix;
  std::map<RowLabel, CMatrix> ohi;  // every T, t~ and W row
};

// Runs phases 1-4 in order, each through a CSIT view of the matching phase.
// Only the (M, N) = (4, 1), S = (3, 1, 1, 6), b = 12 scheme is supported.
PrecoderBuild build_precoders(const ChannelSet& channels, std::uint64_t seed,
                              AccessLog* log = nullptr,
                              FaultInjection fault = FaultInjection::kNone);

}  // namespace ria
