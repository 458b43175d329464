// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ria/channel.hpp"
#include "ria/precoding.hpp"
#include "ria/rational.hpp"
#include "ria/receiver.hpp"

namespace ria {

inline constexpr double kDefaultTol = 1e-8;
inline constexpr std::array<int, kNumPhases> kExpectedStageCounts = {3, 3, 1, 5};

// Everything drawn for one seed: channels, precoders and symbols.
struct TrialData {
  std::uint64_t seed = 0;
  ChannelSet channels;
  PrecoderBuild build;
  SymbolSet x;
  AccessLog log;
};

TrialData make_trial(std::uint64_t seed, FaultInjection fault = FaultInjection::kNone);

// Unit-variance complex Gaussian data symbols, keyed by seed.
SymbolSet draw_symbols(std::uint64_t seed, int b = kSchemeSymbols);

struct TrialResult {
  std::uint64_t seed = 0;
  std::array<DecodeResult, kNumUsers> staged;
  std::array<DecodeResult, kNumUsers> oracle;
  bool all_success = false;
  std::optional<Rational> empirical_dof_per_user;  // only when all four UEs succeed
  double max_residual = 0.0;
  std::string error;  // set when the pipeline threw
};

// Relative error |x_hat - x| / |x|.
double relative_error(const CVector& estimate, const CVector& truth);

// Full frame: channels, precoders, reception and both decoders at every UE.
// Never throws; failures are reported in the result.
TrialResult run_trial(std::uint64_t seed, double tol = kDefaultTol,
                      FaultInjection fault = FaultInjection::kNone);

struct CampaignStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double max_residual = 0.0;
  std::optional<Rational> dof;
  std::vector<std::uint64_t> failures;  // seeds of every non-success

  bool operator==(const CampaignStats&) const = default;
};

// Worker count: `requested` if positive, else the hardware count; either way
// capped by RIA_IBC_THREADS when that is set to a positive integer.
unsigned resolve_threads(unsigned requested = 0);

// Runs fn(0..n-1) on resolve_threads(threads) workers with static striding.
void parallel_for_index(std::uint64_t n, unsigned threads,
                        const std::function<void(std::uint64_t)>& fn);

// Trial k uses seed base_seed + k. Results are reduced in index order, so the
// outcome does not depend on the thread count.
CampaignStats monte_carlo(std::uint64_t num_trials, std::uint64_t base_seed,
                          double tol = kDefaultTol, unsigned threads = 0,
                          FaultInjection fault = FaultInjection::kNone);

struct AuditReport {
  std::uint64_t seed = 0;
  std::vector<ChannelAccess> accesses;
  std::size_t violations = 0;
  std::string error;  // message of the CsitViolation that stopped the build, if any
  bool pass() const { return violations == 0 && error.empty(); }
};

// Precoder construction with every channel query logged.
AuditReport csit_audit(std::uint64_t seed, FaultInjection fault = FaultInjection::kNone);

// 12 T blocks + 24 t~ rows + 12 W rows.
inline constexpr std::size_t kExpectedCsitQueries = 48;

}  // namespace ria
