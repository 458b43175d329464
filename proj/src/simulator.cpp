// SPDX-License-Identifier: Apache-2.0

#include "ria/simulator.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>

#include "ria/rng.hpp"

namespace ria {

SymbolSet draw_symbols(std::uint64_t seed, int b) {
  SymbolSet x;
  for (int i = 1; i <= kNumUsers; ++i) {
    x[i - 1] = complex_gaussian(
        derive_key({seed, static_cast<std::uint64_t>(Stream::kSymbols), std::uint64_t(i)}), b, 1);
  }
  return x;
}

TrialData make_trial(std::uint64_t seed, FaultInjection fault) {
  const FrameConfig frame = build_frame(kSchemeSlots);
  ChannelSet channels = ChannelSet::generate(seed, frame, 4, 1);
  AccessLog log;
  PrecoderBuild build = build_precoders(channels, seed, &log, fault);
  return TrialData{seed, std::move(channels), std::move(build), draw_symbols(seed), std::move(log)};
}

double relative_error(const CVector& estimate, const CVector& truth) {
  if (estimate.size() != truth.size()) return std::numeric_limits<double>::infinity();
  const double n = truth.norm();
  const double d = (estimate - truth).norm();
  return n == 0.0 ? d : d / n;
}

namespace {

double lc_error(const std::vector<CleanLc>& lcs, const CVector& x) {
  double worst = 0.0;
  for (const auto& lc : lcs) {
    const cd v = (lc.row * x)(0);
    worst = std::max(worst, std::abs(lc.value - v) / (1.0 + std::abs(lc.value)));
  }
  return worst;
}

}  // namespace

TrialResult run_trial(std::uint64_t seed, double tol, FaultInjection fault) {
  TrialResult out;
  out.seed = seed;
  try {
    const TrialData data = make_trial(seed, fault);
    const PrecoderSet& pre = data.build.precoders;
    bool all = true;
    for (int j = 1; j <= kNumUsers; ++j) {
      const CVector& truth = data.x[j - 1];
      UeObservations obs = observe(data.channels, pre, data.x, j);
      DecodeResult oracle = nullspace_oracle_decode(j, obs.y, data.channels, pre);
      DecodeResult staged = StagedDecoder(pre.frame(), std::move(obs)).run();

      oracle.residual = relative_error(oracle.recovered, truth);
      oracle.success = oracle.rank12 && oracle.residual < tol;

      staged.residual = relative_error(staged.recovered, truth);
      staged.max_lc_error = lc_error(staged.clean_lcs, truth);
      staged.nullspace_dim = oracle.nullspace_dim;
      staged.oracle_agreement = relative_error(staged.recovered, oracle.recovered);
      if (staged.max_lc_error >= tol) {
        staged.diagnostics.push_back("clean combination inconsistent with the transmitted symbols");
      }
      if (staged.clean_lcs_per_stage != kExpectedStageCounts) {
        staged.diagnostics.push_back("stage counts differ from (3,3,1,5)");
      }
      staged.success = staged.rank12 && staged.residual < tol && staged.diagnostics.empty();

      all = all && staged.success && oracle.success;
      out.max_residual = std::max({out.max_residual, staged.residual, oracle.residual});
      out.staged[j - 1] = std::move(staged);
      out.oracle[j - 1] = std::move(oracle);
    }
    out.all_success = all;
    if (all) out.empirical_dof_per_user = Rational(kSchemeSymbols, total_slots(pre.frame()));
  } catch (const std::exception& e) {
    out.all_success = false;
    out.error = e.what();
    out.max_residual = std::numeric_limits<double>::infinity();
  }
  return out;
}

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RIA_IBC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for_index(std::uint64_t n, unsigned threads,
                        const std::function<void(std::uint64_t)>& fn) {
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), n));
  auto work = [&](unsigned w) {
    for (std::uint64_t k = w; k < n; k += workers) fn(k);
  };
  if (workers <= 1) {
    work(0);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
}

CampaignStats monte_carlo(std::uint64_t num_trials, std::uint64_t base_seed, double tol,
                          unsigned threads, FaultInjection fault) {
  if (num_trials == 0) throw std::invalid_argument("monte_carlo: num_trials must be >= 1");
  struct Slim {
    bool success = false;
    double residual = 0.0;
    std::optional<Rational> dof;
  };
  std::vector<Slim> slots(num_trials);
  parallel_for_index(num_trials, threads, [&](std::uint64_t k) {
    const TrialResult r = run_trial(base_seed + k, tol, fault);
    slots[k] = {r.all_success, r.max_residual, r.empirical_dof_per_user};
  });

  CampaignStats stats;
  stats.trials = num_trials;
  for (std::uint64_t k = 0; k < num_trials; ++k) {
    const Slim& s = slots[k];
    stats.max_residual = std::max(stats.max_residual, s.residual);
    if (s.success) {
      ++stats.successes;
      if (!stats.dof) stats.dof = s.dof;
    } else {
      stats.failures.push_back(base_seed + k);
    }
  }
  return stats;
}

AuditReport csit_audit(std::uint64_t seed, FaultInjection fault) {
  AuditReport rep;
  rep.seed = seed;
  const ChannelSet channels = ChannelSet::generate(seed, build_frame(kSchemeSlots), 4, 1);
  AccessLog log;
  try {
    build_precoders(channels, seed, &log, fault);
  } catch (const CsitViolation& e) {
    rep.error = e.what();
  }
  rep.accesses = std::move(log.accesses);
  rep.violations = static_cast<std::size_t>(std::count_if(
      rep.accesses.begin(), rep.accesses.end(), [](const auto& a) { return a.violation; }));
  return rep;
}

}  // namespace ria
