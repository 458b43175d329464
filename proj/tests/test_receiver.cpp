// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "ria/linalg.hpp"
#include "ria/receiver.hpp"
#include "ria/report.hpp"
#include "ria/simulator.hpp"

using namespace ria;

namespace {

RowLabel tl(int observer, int owner, int symbol) { return RowLabel::tilde(observer, owner, symbol); }

std::set<RowLabel> as_set(const std::vector<RowLabel>& v) { return {v.begin(), v.end()}; }

// Unknown scalars the scheme leaves at UE j, from the round structure alone:
// in each mixed round {j, m, q} the cell-mate piece t~^(j)_{q,m} of the pair
// {m, q} stays unresolved, and in phase 4 the cell-mate share W_{j,m} of the
// triple does.
std::set<RowLabel> symbolic_unknowns(int j) {
  const FrameConfig f = build_frame(kSchemeSlots);
  const int m = cellmate(j);
  std::set<RowLabel> out;
  for (int r = 1; r <= f.rounds(3); ++r) {
    if (round_role(f, 3, r, j) != RoundRole::kMixed) continue;
    for (int q : f.served(3, r)) {
      if (q != j && q != m) out.insert(tl(j, q, m));
    }
  }
  out.insert(RowLabel::W(j, m));
  return out;
}

StagedDecoder decoder_for(const TrialData& d, int j) {
  return StagedDecoder(d.build.precoders.frame(),
                       observe(d.channels, d.build.precoders, d.x, j));
}

}  // namespace

TEST_CASE("reception is linear and respects the TDMA phase") {
  const TrialData d = make_trial(1);
  const PrecoderSet& p = d.build.precoders;
  SymbolSet zero;
  for (auto& x : zero) x = CVector::Zero(12);
  CHECK(receive(d.channels, p, zero, 4, 1, 2).norm() == 0.0);

  // Phase-1 round j at UE j carries only x_j.
  SymbolSet only_other = d.x;
  only_other[2] = CVector::Zero(12);
  CHECK((receive(d.channels, p, only_other, 1, 3, 3)).norm() == 0.0);

  // Phase-2 round {3,4} at UE1 is pure interference.
  SymbolSet only_own = zero;
  only_own[0] = d.x[0];
  CHECK(receive(d.channels, p, only_own, 2, 6, 1).norm() == 0.0);
  CHECK(receive(d.channels, p, d.x, 2, 6, 1).norm() > 0.0);

  const UeObservations obs = observe(d.channels, p, d.x, 1);
  CHECK(obs.y.size() == 15);
  CHECK((obs.y.at({3, 2}) - receive(d.channels, p, d.x, 3, 2, 1)).norm() < 1e-14);
}

TEST_CASE("UE1 ledger holds the expected OHI round by round") {
  const TrialData d = make_trial(2);
  StagedDecoder dec = decoder_for(d, 1);
  dec.phase1_collect();
  dec.phase2_decode();
  dec.phase3_decode();
  const OhiLedger& L = dec.ledger();

  REQUIRE(L.phase1.size() == 3);
  CHECK(L.phase1.at(2).label == RowLabel::T(1, 2));
  CHECK(L.phase1.at(3).label == RowLabel::T(1, 3));
  CHECK(L.phase1.at(4).label == RowLabel::T(1, 4));

  REQUIRE(L.coupled_pairs.size() == 3);
  CHECK(L.coupled_pairs[0].source == RoundId{2, 4});
  CHECK(L.coupled_pairs[0].labels() == std::vector<RowLabel>{tl(1, 3, 2), tl(1, 2, 3)});
  CHECK(L.coupled_pairs[1].labels() == std::vector<RowLabel>{tl(1, 4, 2), tl(1, 2, 4)});
  CHECK(L.coupled_pairs[2].labels() == std::vector<RowLabel>{tl(1, 4, 3), tl(1, 3, 4)});
  for (const auto& rec : L.coupled_pairs) {
    CHECK(rec.pieces[0].user != rec.pieces[1].user);
    CHECK(rec.pieces[0].user != 1);
    CHECK(rec.pieces[1].user != 1);
  }

  REQUIRE(L.coupled_triple.has_value());
  CHECK(L.coupled_triple->source == RoundId{3, 4});
  CHECK(L.coupled_triple->labels() ==
        std::vector<RowLabel>{RowLabel::W(1, 2), RowLabel::W(1, 3), RowLabel::W(1, 4)});

  // Rounds {1,2,3} and {1,2,4} decouple [t~_{3,2}, t~_{2,3}] and [t~_{4,2}, t~_{2,4}].
  REQUIRE(L.decoupled.size() == 2);
  CHECK(L.decoupled[0].round == RoundId{3, 1});
  CHECK(as_set(L.decoupled[0].labels) == std::set<RowLabel>{tl(1, 3, 2), tl(1, 2, 3)});
  CHECK(L.decoupled[1].round == RoundId{3, 2});
  CHECK(as_set(L.decoupled[1].labels) == std::set<RowLabel>{tl(1, 4, 2), tl(1, 2, 4)});
}

TEST_CASE("phase-3 round reports at UE1") {
  const TrialData d = make_trial(3);
  StagedDecoder dec = decoder_for(d, 1);
  dec.phase1_collect();
  dec.phase2_decode();
  CHECK(dec.phase3_decode().size() == 1);
  std::map<RoundId, RoundReport> rep;
  for (const auto& r : dec.round_reports()) rep[r.id] = r;

  CHECK(rep.at({3, 1}).role == RoundRole::kMixed);
  CHECK(rep.at({3, 1}).unknowns == std::vector<RowLabel>{tl(1, 3, 2)});
  CHECK(rep.at({3, 2}).unknowns == std::vector<RowLabel>{tl(1, 4, 2)});
  // Serving round {1,3,4}: the pair [t~_{4,3}, t~_{3,4}] cancels through its sum.
  CHECK(rep.at({3, 3}).role == RoundRole::kServing);
  CHECK(rep.at({3, 3}).unknowns.empty());
  bool used_34 = false;
  for (const auto& s : rep.at({3, 3}).sums_used) {
    used_34 = used_34 || s == std::vector<RowLabel>{tl(1, 4, 3), tl(1, 3, 4)};
  }
  CHECK(used_34);
  CHECK(rep.at({3, 4}).role == RoundRole::kListening);
  CHECK(dec.mixed_residuals().size() == 2);
}

TEST_CASE("unknown scalars match the symbolic count at every UE") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TrialData d = make_trial(seed);
    for (int j = 1; j <= 4; ++j) {
      StagedDecoder dec = decoder_for(d, j);
      const DecodeResult r = dec.run();
      const std::set<RowLabel> want = symbolic_unknowns(j);
      CHECK(want.size() == 3);
      CHECK(dec.unknown_count() == 3);
      CHECK(dec.unknown_rank() == 3);
      CHECK(as_set(dec.round_reports().back().unknowns) == want);
      // 2 mixed + 6 phase-4 equations, 3 unknowns -> 5 clean combinations.
      CHECK(r.clean_lcs_per_stage == std::array<int, 4>{3, 3, 1, 5});
    }
  }
}

TEST_CASE("clean combinations are consistent with the transmitted symbols") {
  const TrialData d = make_trial(4);
  for (int j = 1; j <= 4; ++j) {
    const DecodeResult r = decoder_for(d, j).run();
    CHECK(r.success);
    CHECK(r.rank12);
    REQUIRE(r.clean_lcs.size() == 12);
    for (const auto& lc : r.clean_lcs) {
      const cd v = (lc.row * d.x[j - 1])(0);
      CHECK(std::abs(lc.value - v) < 1e-8 * (1.0 + std::abs(lc.value)));
    }
    CHECK(relative_error(r.recovered, d.x[j - 1]) < 1e-8);
    CHECK(r.max_alignment_residual < 1e-9);
  }
}

TEST_CASE("staged stages must run in order") {
  const TrialData d = make_trial(5);
  StagedDecoder dec = decoder_for(d, 2);
  CHECK_THROWS_AS(dec.phase2_decode(), std::logic_error);
  dec.phase1_collect();
  CHECK_THROWS_AS(dec.phase1_collect(), std::logic_error);
}

TEST_CASE("null-space oracle: 16-dimensional interference, 12-dimensional null space") {
  // Regression baseline: the interference block of the 28 x 48 signal-space
  // matrix has rank 16 at every UE.
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const TrialData d = make_trial(seed);
    for (int j = 1; j <= 4; ++j) {
      const UeObservations obs = observe(d.channels, d.build.precoders, d.x, j);
      const DecodeResult o = nullspace_oracle_decode(j, obs.y, d.channels, d.build.precoders);
      CHECK(o.nullspace_dim == 12);
      CHECK(o.rank_report.at("interference") == 16);
      CHECK(o.rank12);
      CHECK(relative_error(o.recovered, d.x[j - 1]) < 1e-8);
      const DecodeResult s = StagedDecoder(d.build.precoders.frame(), obs).run();
      CHECK(relative_error(s.recovered, o.recovered) < 1e-8);
    }
  }
}

TEST_CASE("sign fault breaks the serving-round cancellation") {
  const TrialData d = make_trial(1, FaultInjection::kPhase3SignFlip);
  const DecodeResult r = decoder_for(d, 1).run();
  CHECK(r.clean_lcs_per_stage[2] == 0);
  CHECK_FALSE(r.success);
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("solve_symbols needs rank 12") {
  std::vector<CleanLc> lcs;
  for (int k = 0; k < 12; ++k) {
    CRow row = CRow::Zero(12);
    row(k % 11) = 1.0;  // column 11 never hit
    lcs.push_back({row, cd(k, 0), {1, 1}});
  }
  CHECK_THROWS_AS(solve_symbols(lcs), DecodeError);
  CHECK_THROWS_AS(solve_symbols({}), DecodeError);
  lcs.back().row = CRow::Zero(12);
  lcs.back().row(11) = 1.0;
  CHECK(solve_symbols(lcs).size() == 12);
}

TEST_CASE("DecodeResult JSON carries the summary fields and round-trips") {
  const TrialResult t = run_trial(6);
  const DecodeResult& r = t.staged[0];
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"ue", "clean_lcs_per_stage", "rank12", "residual",
                                         "nullspace_dim"});
  CHECK(j.at("clean_lcs_per_stage") == nlohmann::json::array({3, 3, 1, 5}));
  const DecodeResult back = decode_result_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.residual == r.residual);
}
