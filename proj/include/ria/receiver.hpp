// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ria/channel.hpp"
#include "ria/precoding.hpp"

namespace ria {

using SymbolSet = std::array<CVector, kNumUsers>;

// y_j^(p,r) = sum_i H_{j,c(i)}^(p,r) V_i^(p,r) x_i, noiseless.
CVector receive(const ChannelSet& channels, const PrecoderSet& precoders, const SymbolSet& x,
                int phase, int round, int j);

// Everything UE j holds after the frame: its observations and, with global
// receiver CSI, the effective signal rows H_{j,c(i)}^(p,r) V_i^(p,r) of every user.
struct UeObservations {
  int ue = 0;
  std::map<RoundId, CVector> y;
  std::map<RoundId, std::array<CMatrix, kNumUsers>> effective;
};

UeObservations observe(const ChannelSet& channels, const PrecoderSet& precoders,
                       const SymbolSet& x, int j);

// Rows from the receiver's "serving" cancellation must fit the known span to this.
inline constexpr double kAlignmentFailTol = 1e-6;
// Two sum-record coefficients closer than this (relative) are treated as equal.
inline constexpr double kCouplingTol = 1e-6;

struct CleanLc {
  CRow row;  // applies to the UE's own symbol vector
  cd value;
  RoundId provenance;
};

// T_{j,i}: three rows and the three observed values T_{j,i} x_i.
struct TRecord {
  RowLabel label;
  CMatrix rows;
  CVector values;
};

struct LedgerPiece {
  int user = 0;
  RowLabel label;
  CRow row;
};

// An observed scalar equal to the sum of its pieces applied to their owners' symbols.
struct SumRecord {
  RoundId source;
  std::vector<LedgerPiece> pieces;
  cd value;

  std::vector<RowLabel> labels() const;
};

// A coupled pair separated by a mixed round: one piece is carried forward as an
// unknown scalar, the other through the pair-sum identity.
struct SplitRecord {
  RoundId round;
  std::vector<RowLabel> labels;
  RowLabel unknown;
};

struct OhiLedger {
  std::map<int, TRecord> phase1;  // keyed by interferer
  std::vector<SumRecord> coupled_pairs;
  std::optional<SumRecord> coupled_triple;
  std::vector<SplitRecord> decoupled;
};

// d x_j + sum_u gamma_u a_u = value, a_u unknown interference scalars keyed by
// the ledger piece they stand for.
struct ResidualEquation {
  CRow desired;
  std::map<RowLabel, cd> unknowns;
  cd value;
  RoundId provenance;
};

struct RoundReport {
  RoundId id;
  RoundRole role = RoundRole::kListening;
  std::vector<std::vector<RowLabel>> sums_used;  // sum records whose value was subtracted
  std::vector<RowLabel> unknowns;
  double max_fit_residual = 0.0;
};

struct DecodeResult {
  int ue = 0;
  std::vector<CleanLc> clean_lcs;
  std::array<int, kNumPhases> clean_lcs_per_stage{};
  CVector recovered;
  bool rank12 = false;
  double residual = std::numeric_limits<double>::infinity();
  int nullspace_dim = -1;
  double oracle_agreement = std::numeric_limits<double>::infinity();
  double max_alignment_residual = 0.0;
  double max_lc_error = 0.0;  // max |value - row x| / (1 + |value|) against ground truth
  std::map<std::string, int> rank_report;
  std::vector<std::string> diagnostics;
  bool success = false;
};

// {"ue","clean_lcs_per_stage","rank12","residual","nullspace_dim"}
nlohmann::ordered_json to_json(const DecodeResult& r);

// Per-UE decoder: cancel with phase-1 OHI, use the coupled OHI,
// then zero-force the phase-4 equations jointly with the mixed-round residuals.
class StagedDecoder {
 public:
  StagedDecoder(const FrameConfig& frame, UeObservations obs);

  std::vector<CleanLc> phase1_collect();
  std::vector<CleanLc> phase2_decode();
  std::vector<CleanLc> phase3_decode();
  std::vector<CleanLc> phase4_decode();

  // Runs every stage and solves for the symbols; never throws on scheme failures.
  DecodeResult run();

  const OhiLedger& ledger() const { return ledger_; }
  const std::vector<ResidualEquation>& mixed_residuals() const { return mixed_; }
  const std::vector<RoundReport>& round_reports() const { return reports_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  // Rank of the phase-4 unknown-coefficient matrix (-1 before phase 4).
  int unknown_rank() const { return unknown_rank_; }
  int unknown_count() const { return unknown_count_; }
  double max_fit_residual() const { return max_fit_residual_; }

 private:
  struct Built {
    ResidualEquation eq;
    std::vector<std::vector<RowLabel>> sums_used;
    double fit_residual = 0.0;
  };

  // Express one received row: subtract every interference term the ledger can
  // explain and collect what remains as unknown scalars.
  Built build_equation(RoundId id, Eigen::Index row, bool with_triple) const;
  void require_stage(int phase) const;

  FrameConfig frame_;
  UeObservations obs_;
  int j_;
  int stage_ = 0;
  OhiLedger ledger_;
  std::vector<ResidualEquation> mixed_;
  std::vector<RoundReport> reports_;
  std::vector<std::string> diagnostics_;
  int unknown_rank_ = -1;
  int unknown_count_ = 0;
  double max_fit_residual_ = 0.0;
};

// Stacks the clean combinations and solves for the 12 symbols; throws
// DecodeError when the stack has rank below the symbol count.
CVector solve_symbols(const std::vector<CleanLc>& clean_lcs, int b = kSchemeSymbols);

// Independent check: zero-force the whole 28 x 36 interference block of UE j's
// global signal-space matrix and solve the projected desired block.
DecodeResult nullspace_oracle_decode(int j, const std::map<RoundId, CVector>& y,
                                     const ChannelSet& channels, const PrecoderSet& precoders);

}  // namespace ria
