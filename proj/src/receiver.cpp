// SPDX-License-Identifier: Apache-2.0

#include "ria/receiver.hpp"

#include <algorithm>
#include <cmath>

#include "ria/linalg.hpp"

namespace ria {

namespace {

CMatrix effective_block(const ChannelSet& channels, const PrecoderSet& precoders, int j, int i,
                        int phase, int round) {
  return block_channel(channels, j, cell_of(i), phase, round) * precoders.V(i, phase, round);
}

std::string round_str(RoundId id) {
  return "(" + std::to_string(id.phase) + "," + std::to_string(id.round) + ")";
}

}  // namespace

CVector receive(const ChannelSet& channels, const PrecoderSet& precoders, const SymbolSet& x,
                int phase, int round, int j) {
  const Eigen::Index rows = channels.n() * channels.frame().slots(phase);
  CVector y = CVector::Zero(rows);
  for (int i = 1; i <= kNumUsers; ++i) {
    if (!precoders.frame().is_served(phase, round, i)) continue;
    y += effective_block(channels, precoders, j, i, phase, round) * x[i - 1];
  }
  return y;
}

UeObservations observe(const ChannelSet& channels, const PrecoderSet& precoders,
                       const SymbolSet& x, int j) {
  UeObservations obs;
  obs.ue = j;
  for (const RoundId id : precoders.frame().all_rounds()) {
    std::array<CMatrix, kNumUsers> eff;
    CVector y = CVector::Zero(channels.n() * precoders.frame().slots(id.phase));
    for (int i = 1; i <= kNumUsers; ++i) {
      eff[i - 1] = effective_block(channels, precoders, j, i, id.phase, id.round);
      y += eff[i - 1] * x[i - 1];
    }
    obs.y.emplace(id, std::move(y));
    obs.effective.emplace(id, std::move(eff));
  }
  return obs;
}

std::vector<RowLabel> SumRecord::labels() const {
  std::vector<RowLabel> out;
  for (const auto& p : pieces) out.push_back(p.label);
  return out;
}

nlohmann::ordered_json to_json(const DecodeResult& r) {
  nlohmann::ordered_json j;
  j["ue"] = r.ue;
  j["clean_lcs_per_stage"] = r.clean_lcs_per_stage;
  j["rank12"] = r.rank12;
  j["residual"] = r.residual;
  j["nullspace_dim"] = r.nullspace_dim;
  return j;
}

StagedDecoder::StagedDecoder(const FrameConfig& frame, UeObservations obs)
    : frame_(frame), obs_(std::move(obs)), j_(obs_.ue) {
  if (j_ < 1 || j_ > kNumUsers) throw std::invalid_argument("StagedDecoder: bad UE index");
  if (frame_.slot_counts() != kSchemeSlots) {
    throw std::invalid_argument("StagedDecoder: only the S = (3,1,1,6) frame is supported");
  }
}

void StagedDecoder::require_stage(int phase) const {
  if (stage_ != phase - 1) {
    throw std::logic_error("StagedDecoder: stage " + std::to_string(phase) +
                           " called out of order");
  }
}

std::vector<CleanLc> StagedDecoder::phase1_collect() {
  require_stage(1);
  std::vector<CleanLc> out;
  for (int r = 1; r <= frame_.rounds(1); ++r) {
    const RoundId id{1, r};
    const int owner = frame_.served(1, r).front();
    const CMatrix& e = obs_.effective.at(id)[owner - 1];
    const CVector& y = obs_.y.at(id);
    RoundReport rep{id, round_role(frame_, 1, r, j_), {}, {}, 0.0};
    if (owner == j_) {
      for (Eigen::Index k = 0; k < e.rows(); ++k) out.push_back({e.row(k), y(k), id});
    } else {
      ledger_.phase1[owner] = {RowLabel::T(j_, owner), e, y};
    }
    reports_.push_back(std::move(rep));
  }
  stage_ = 1;
  return out;
}

StagedDecoder::Built StagedDecoder::build_equation(RoundId id, Eigen::Index row,
                                                   bool with_triple) const {
  Built b;
  const auto& eff = obs_.effective.at(id);
  b.eq.desired = eff[j_ - 1].row(row);
  b.eq.provenance = id;
  cd known = 0.0;

  // Sum records visible in this stage; index -1 is the triple.
  std::vector<std::pair<int, const SumRecord*>> records;
  for (std::size_t k = 0; k < ledger_.coupled_pairs.size(); ++k) {
    records.emplace_back(static_cast<int>(k), &ledger_.coupled_pairs[k]);
  }
  if (with_triple && ledger_.coupled_triple) records.emplace_back(-1, &*ledger_.coupled_triple);

  std::map<int, std::map<int, cd>> beta;  // record -> piece user -> coefficient
  double scale = 0.0;

  for (int i = 1; i <= kNumUsers; ++i) {
    if (i == j_) continue;
    const CRow e = eff[i - 1].row(row);
    if (e.squaredNorm() == 0.0) continue;
    const TRecord& t = ledger_.phase1.at(i);
    std::vector<CMatrix> parts{t.rows};
    std::vector<int> owners;
    for (const auto& [idx, rec] : records) {
      for (const auto& p : rec->pieces) {
        if (p.user != i) continue;
        parts.push_back(p.row);
        owners.push_back(idx);
      }
    }
    const linalg::RowFit fit = linalg::fit_row(e, linalg::stack_rows(parts));
    b.fit_residual = std::max(b.fit_residual, fit.relative_residual);
    const Eigen::Index nt = t.rows.rows();
    known += (fit.coefficients.head(nt) * t.values)(0);
    scale = std::max(scale, fit.coefficients.cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < owners.size(); ++k) {
      beta[owners[k]][i] += fit.coefficients(nt + static_cast<Eigen::Index>(k));
    }
  }

  const double floor = kCouplingTol * scale;
  const int mate = cellmate(j_);
  for (const auto& [idx, rec] : records) {
    auto it = beta.find(idx);
    if (it == beta.end()) continue;
    const auto& coeff = it->second;
    auto beta_of = [&](int u) {
      auto c = coeff.find(u);
      return c == coeff.end() ? cd{0.0} : c->second;
    };
    // Reference piece: the non-cell-mate piece of largest user index. Its
    // coefficient is taken through the observed sum; any piece whose coefficient
    // differs leaves the difference behind as an unknown scalar.
    int ref = 0;
    for (const auto& p : rec->pieces) {
      if (p.user != mate) ref = std::max(ref, p.user);
    }
    if (ref == 0) ref = rec->pieces.back().user;
    const cd b_ref = beta_of(ref);
    known += b_ref * rec->value;
    if (std::abs(b_ref) > floor) b.sums_used.push_back(rec->labels());
    for (const auto& p : rec->pieces) {
      if (p.user == ref) continue;
      const cd gamma = beta_of(p.user) - b_ref;
      if (std::abs(gamma) > floor) b.eq.unknowns[p.label] += gamma;
    }
  }
  b.eq.value = obs_.y.at(id)(row) - known;
  return b;
}

std::vector<CleanLc> StagedDecoder::phase2_decode() {
  require_stage(2);
  std::vector<CleanLc> out;
  for (int r = 1; r <= frame_.rounds(2); ++r) {
    const RoundId id{2, r};
    const UserSet& a = frame_.served(2, r);
    RoundReport rep{id, round_role(frame_, 2, r, j_), {}, {}, 0.0};
    if (rep.role == RoundRole::kServing) {
      // The partner's signal lies in T_{j,partner}.
      Built b = build_equation(id, 0, false);
      rep.max_fit_residual = b.fit_residual;
      max_fit_residual_ = std::max(max_fit_residual_, b.fit_residual);
      if (!b.eq.unknowns.empty() || b.fit_residual > kAlignmentFailTol) {
        diagnostics_.push_back("phase-2 round " + round_str(id) + ": interference not aligned");
      } else {
        out.push_back({b.eq.desired, b.eq.value, id});
      }
    } else {
      SumRecord rec;
      rec.source = id;
      rec.value = obs_.y.at(id)(0);
      for (int k = 0; k < 2; ++k) {
        const int u = a[k], v = a[1 - k];
        rec.pieces.push_back({u, RowLabel::tilde(j_, v, u), obs_.effective.at(id)[u - 1].row(0)});
      }
      rep.sums_used.push_back(rec.labels());
      ledger_.coupled_pairs.push_back(std::move(rec));
    }
    reports_.push_back(std::move(rep));
  }
  stage_ = 2;
  return out;
}

std::vector<CleanLc> StagedDecoder::phase3_decode() {
  require_stage(3);
  std::vector<CleanLc> out;
  for (int r = 1; r <= frame_.rounds(3); ++r) {
    const RoundId id{3, r};
    RoundReport rep{id, round_role(frame_, 3, r, j_), {}, {}, 0.0};
    if (rep.role == RoundRole::kListening) {
      SumRecord rec;
      rec.source = id;
      rec.value = obs_.y.at(id)(0);
      for (int u : frame_.served(3, r)) {
        rec.pieces.push_back({u, RowLabel::W(j_, u), obs_.effective.at(id)[u - 1].row(0)});
      }
      rep.sums_used.push_back(rec.labels());
      ledger_.coupled_triple = std::move(rec);
      reports_.push_back(std::move(rep));
      continue;
    }
    Built b = build_equation(id, 0, false);
    rep.sums_used = b.sums_used;
    rep.max_fit_residual = b.fit_residual;
    for (const auto& [label, g] : b.eq.unknowns) rep.unknowns.push_back(label);
    max_fit_residual_ = std::max(max_fit_residual_, b.fit_residual);
    if (b.fit_residual > kAlignmentFailTol) {
      diagnostics_.push_back("phase-3 round " + round_str(id) + ": interference outside OHI span");
    } else if (rep.role == RoundRole::kServing) {
      if (b.eq.unknowns.empty()) {
        out.push_back({b.eq.desired, b.eq.value, id});
      } else {
        diagnostics_.push_back("phase-3 round " + round_str(id) +
                               ": coupled pair does not cancel in a serving round");
      }
    } else {
      for (const auto& [label, g] : b.eq.unknowns) {
        for (const auto& rec : ledger_.coupled_pairs) {
          const auto labels = rec.labels();
          if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
            ledger_.decoupled.push_back({id, labels, label});
          }
        }
      }
      mixed_.push_back(std::move(b.eq));
    }
    reports_.push_back(std::move(rep));
  }
  stage_ = 3;
  return out;
}

std::vector<CleanLc> StagedDecoder::phase4_decode() {
  require_stage(4);
  stage_ = 4;
  if (!ledger_.coupled_triple) {
    diagnostics_.push_back("phase 4: no phase-3 listening round recorded");
    return {};
  }
  const RoundId id{4, 1};
  RoundReport rep{id, RoundRole::kServing, {}, {}, 0.0};
  std::vector<ResidualEquation> eqs = mixed_;
  const Eigen::Index rows = obs_.y.at(id).size();
  for (Eigen::Index s = 0; s < rows; ++s) {
    Built b = build_equation(id, s, true);
    rep.max_fit_residual = std::max(rep.max_fit_residual, b.fit_residual);
    for (auto& u : b.sums_used) {
      if (std::find(rep.sums_used.begin(), rep.sums_used.end(), u) == rep.sums_used.end()) {
        rep.sums_used.push_back(std::move(u));
      }
    }
    eqs.push_back(std::move(b.eq));
  }
  max_fit_residual_ = std::max(max_fit_residual_, rep.max_fit_residual);
  if (rep.max_fit_residual > kAlignmentFailTol) {
    diagnostics_.push_back("phase 4: interference outside OHI span");
  }

  std::map<RowLabel, Eigen::Index> col;
  for (const auto& eq : eqs) {
    for (const auto& [label, g] : eq.unknowns) col.emplace(label, 0);
  }
  Eigen::Index next = 0;
  for (auto& [label, c] : col) {
    c = next++;
    rep.unknowns.push_back(label);
  }
  const Eigen::Index n_eq = static_cast<Eigen::Index>(eqs.size());
  CMatrix u = CMatrix::Zero(n_eq, next);
  CMatrix d(n_eq, obs_.effective.at(id)[j_ - 1].cols());
  CVector z(n_eq);
  for (Eigen::Index k = 0; k < n_eq; ++k) {
    for (const auto& [label, g] : eqs[k].unknowns) u(k, col.at(label)) = g;
    d.row(k) = eqs[k].desired;
    z(k) = eqs[k].value;
  }
  unknown_count_ = static_cast<int>(next);
  unknown_rank_ = linalg::numerical_rank(u);
  if (unknown_rank_ != 3) {
    diagnostics_.push_back("phase 4: unknown-coefficient rank " + std::to_string(unknown_rank_) +
                           " (expected 3)");
  }
  const CMatrix q = linalg::left_null_space(u);
  const CMatrix qd = q * d;
  const CVector qz = q * z;
  std::vector<CleanLc> out;
  for (Eigen::Index k = 0; k < q.rows(); ++k) out.push_back({qd.row(k), qz(k), id});
  reports_.push_back(std::move(rep));
  return out;
}

DecodeResult StagedDecoder::run() {
  DecodeResult res;
  res.ue = j_;
  const std::array<std::vector<CleanLc>, kNumPhases> stages{phase1_collect(), phase2_decode(),
                                                            phase3_decode(), phase4_decode()};
  for (int p = 0; p < kNumPhases; ++p) {
    res.clean_lcs_per_stage[p] = static_cast<int>(stages[p].size());
    res.clean_lcs.insert(res.clean_lcs.end(), stages[p].begin(), stages[p].end());
  }
  std::vector<CMatrix> rows;
  for (const auto& lc : res.clean_lcs) rows.push_back(lc.row);
  const int rank = rows.empty() ? 0 : linalg::numerical_rank(linalg::stack_rows(rows));
  res.rank_report["clean_stack"] = rank;
  res.rank_report["unknowns"] = unknown_count_;
  res.rank_report["unknown_rank"] = unknown_rank_;
  res.rank12 = rank == kSchemeSymbols;
  res.max_alignment_residual = max_fit_residual_;
  try {
    res.recovered = solve_symbols(res.clean_lcs);
  } catch (const DecodeError& e) {
    diagnostics_.push_back(e.what());
  }
  res.diagnostics = diagnostics_;
  res.success = res.rank12 && diagnostics_.empty();
  return res;
}

CVector solve_symbols(const std::vector<CleanLc>& clean_lcs, int b) {
  if (clean_lcs.empty()) throw DecodeError("solve_symbols: no clean combinations");
  const Eigen::Index n = static_cast<Eigen::Index>(clean_lcs.size());
  CMatrix a(n, clean_lcs.front().row.size());
  CVector y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a.row(k) = clean_lcs[k].row;
    y(k) = clean_lcs[k].value;
  }
  if (a.cols() != b) throw std::invalid_argument("solve_symbols: row width != b");
  const int rank = linalg::numerical_rank(a);
  if (rank < b) {
    throw DecodeError("clean-combination stack has rank " + std::to_string(rank) + " < " +
                      std::to_string(b));
  }
  return linalg::solve_full_column_rank(a, y);
}

DecodeResult nullspace_oracle_decode(int j, const std::map<RoundId, CVector>& y,
                                     const ChannelSet& channels, const PrecoderSet& precoders) {
  DecodeResult res;
  res.ue = j;
  const FrameConfig& frame = precoders.frame();
  const int b = precoders.b();
  std::vector<CMatrix> g_rows;
  std::vector<CMatrix> y_rows;
  for (const RoundId id : frame.all_rounds()) {
    const Eigen::Index rows = channels.n() * frame.slots(id.phase);
    CMatrix g(rows, kNumUsers * b);
    for (int i = 1; i <= kNumUsers; ++i) {
      g.middleCols((i - 1) * b, b) = effective_block(channels, precoders, j, i, id.phase, id.round);
    }
    g_rows.push_back(std::move(g));
    y_rows.push_back(y.at(id));
  }
  const CMatrix g = linalg::stack_rows(g_rows);
  const CVector yy = linalg::stack_rows(y_rows);

  CMatrix interference(g.rows(), (kNumUsers - 1) * b);
  for (int i = 1, k = 0; i <= kNumUsers; ++i) {
    if (i == j) continue;
    interference.middleCols(k++ * b, b) = g.middleCols((i - 1) * b, b);
  }
  const CMatrix q = linalg::left_null_space(interference);
  const CMatrix desired = q * g.middleCols((j - 1) * b, b);
  res.nullspace_dim = static_cast<int>(q.rows());
  res.rank_report["interference"] = static_cast<int>(g.rows() - q.rows());
  const int rank = desired.rows() == 0 ? 0 : linalg::numerical_rank(desired);
  res.rank_report["projected_desired"] = rank;
  res.rank12 = rank == b;
  if (res.nullspace_dim < b) {
    res.diagnostics.push_back("interference null space has dimension " +
                              std::to_string(res.nullspace_dim) + " < " + std::to_string(b));
  }
  if (res.rank12) {
    res.recovered = linalg::solve_full_column_rank(desired, q * yy);
  } else {
    res.diagnostics.push_back("projected desired block has rank " + std::to_string(rank));
  }
  res.success = res.rank12;
  return res;
}

}  // namespace ria
