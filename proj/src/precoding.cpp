// SPDX-License-Identifier: Apache-2.0

#include "ria/precoding.hpp"

#include <algorithm>
#include <sstream>

#include "ria/rng.hpp"

namespace ria {

std::string RowLabel::str() const {
  std::ostringstream os;
  switch (kind) {
    case OhiKind::kT:
      os << "T_{" << owner << ',' << symbol << '}';
      break;
    case OhiKind::kTilde:
      os << "t~^(" << observer << ")_{" << owner << ',' << symbol << '}';
      break;
    case OhiKind::kW:
      os << "W_{" << owner << ',' << symbol << '}';
      break;
  }
  return os.str();
}

MixCoefficients MixCoefficients::draw(std::uint64_t seed, const FrameConfig& frame, int m) {
  const auto tag = static_cast<std::uint64_t>(Stream::kMixing);
  MixCoefficients mix;
  const int rows_per_slot_p1 = frame.slots(1);  // N S1 with N = 1
  for (int r = 1; r <= frame.rounds(2); ++r) {
    for (int user : frame.served(2, r)) {
      mix.phase2[{user, r}] =
          complex_gaussian(derive_key({seed, tag, 2, std::uint64_t(r), std::uint64_t(user)}),
                           m * frame.slots(2), rows_per_slot_p1);
    }
  }
  for (int r = 1; r <= frame.rounds(3); ++r) {
    for (int k = 1; k <= 3; ++k) {
      mix.phase3[r - 1][k - 1] =
          complex_gaussian(derive_key({seed, tag, 3, std::uint64_t(r), std::uint64_t(k)}),
                           m * frame.slots(3), 1);
    }
  }
  // Independent per-slot M x 1 blocks stacked over the S4 slots.
  for (int user = 1; user <= kNumUsers; ++user) {
    CVector sigma(m * frame.slots(4));
    for (int s = 1; s <= frame.slots(4); ++s) {
      sigma.segment((s - 1) * m, m) =
          complex_gaussian(derive_key({seed, tag, 4, std::uint64_t(user), std::uint64_t(s)}), m, 1);
    }
    mix.phase4[user - 1] = std::move(sigma);
  }
  return mix;
}

PrecoderSet::PrecoderSet(const FrameConfig& frame, int m, int b) : frame_(frame), m_(m), b_(b) {
  for (const RoundId& id : frame_.all_rounds()) {
    for (int user = 1; user <= kNumUsers; ++user) {
      v_[{user, id}] = CMatrix::Zero(m_ * frame_.slots(id.phase), b_);
    }
  }
}

const CMatrix& PrecoderSet::V(int user, int phase, int round) const {
  auto it = v_.find({user, RoundId{phase, round}});
  if (it == v_.end()) {
    throw std::out_of_range("no precoder for user " + std::to_string(user) + " round (" +
                            std::to_string(phase) + "," + std::to_string(round) + ")");
  }
  return it->second;
}

void PrecoderSet::set(int user, int phase, int round, CMatrix v) {
  if (!frame_.is_served(phase, round, user)) {
    throw std::invalid_argument("user " + std::to_string(user) + " is not served in round (" +
                                std::to_string(phase) + "," + std::to_string(round) + ")");
  }
  auto& slot = v_.at({user, RoundId{phase, round}});
  if (v.rows() != slot.rows() || v.cols() != slot.cols()) {
    throw std::invalid_argument("precoder shape mismatch");
  }
  slot = std::move(v);
}

void PrecoderSet::normalize_round(int phase, int round) {
  double largest = 0.0;
  for (int user : frame_.served(phase, round)) {
    largest = std::max(largest, V(user, phase, round).colwise().norm().maxCoeff());
  }
  if (largest == 0.0) return;
  for (int user : frame_.served(phase, round)) v_.at({user, RoundId{phase, round}}) /= largest;
}

std::array<Phase3Term, 2> phase3_terms(const UserSet& served, int user) {
  if (served.size() != 3) throw std::invalid_argument("phase-3 rounds serve three users");
  const int a = served[0], b = served[1], c = served[2];
  // (sigma index, pair members, observer of the coupled pair)
  const std::array<std::array<int, 4>, 3> pairs = {{{1, a, b, c}, {2, a, c, b}, {3, b, c, a}}};
  std::array<Phase3Term, 2> terms{};
  int n = 0;
  for (const auto& [sigma, u, v, observer] : pairs) {
    if (user == u) terms[n++] = {sigma, RowLabel::tilde(observer, v, u)};
    else if (user == v) terms[n++] = {sigma, RowLabel::tilde(observer, u, v)};
  }
  if (n != 2) throw std::invalid_argument("user is not served in this phase-3 round");
  return terms;
}

std::array<RowLabel, 3> phase4_terms(int user) {
  std::array<RowLabel, 3> terms{};
  int k = 0;
  for (int m = 1; m <= kNumUsers; ++m) {
    if (m != user) terms[k++] = RowLabel::W(m, user);
  }
  return terms;
}

FaultInjection parse_fault(const std::string& name) {
  if (name.empty() || name == "none") return FaultInjection::kNone;
  if (name == "phase2-csi") return FaultInjection::kPhase2SameStageCsi;
  if (name == "phase3-sign") return FaultInjection::kPhase3SignFlip;
  throw std::invalid_argument("unknown fault '" + name + "'");
}

std::array<CMatrix, kNumUsers> phase1_precoders(std::uint64_t seed, int b) {
  std::array<CMatrix, kNumUsers> out;
  for (int user = 1; user <= kNumUsers; ++user) {
    CMatrix v = complex_gaussian(
        derive_key({seed, static_cast<std::uint64_t>(Stream::kPhase1Precoder), std::uint64_t(user)}),
        b, b);
    v.colwise().normalize();
    out[user - 1] = std::move(v);
  }
  return out;
}

OhiRow compute_T(const CsitView& csit, const PrecoderSet& precoders, int j, int i) {
  if (j == i) throw std::invalid_argument("T_{j,i} needs j != i");
  const int round = precoders.frame().round_of(1, {i});
  return {RowLabel::T(j, i), csit.block(j, cell_of(i), 1, round) * precoders.V(i, 1, round)};
}

void phase2_precoders(const std::map<RowLabel, CMatrix>& t_blocks, const MixCoefficients& mix,
                      PrecoderSet& precoders) {
  const FrameConfig& frame = precoders.frame();
  for (int r = 1; r <= frame.rounds(2); ++r) {
    const auto& served = frame.served(2, r);
    for (int k = 0; k < 2; ++k) {
      const int user = served[k];
      const int partner = served[1 - k];
      precoders.set(user, 2, r, mix.phase2.at({user, r}) * t_blocks.at(RowLabel::T(partner, user)));
    }
    precoders.normalize_round(2, r);
  }
}

std::map<RowLabel, CMatrix> compute_t_rows(const CsitView& csit, const PrecoderSet& precoders) {
  const FrameConfig& frame = precoders.frame();
  std::map<RowLabel, CMatrix> rows;
  for (int r = 1; r <= frame.rounds(2); ++r) {
    const auto& served = frame.served(2, r);
    for (int observer = 1; observer <= kNumUsers; ++observer) {
      if (frame.is_served(2, r, observer)) continue;
      for (int k = 0; k < 2; ++k) {
        const int symbol = served[k];
        const int partner = served[1 - k];
        rows[RowLabel::tilde(observer, partner, symbol)] =
            csit.block(observer, cell_of(symbol), 2, r) * precoders.V(symbol, 2, r);
      }
    }
  }
  return rows;
}

void phase3_precoders(const std::map<RowLabel, CMatrix>& t_rows, const MixCoefficients& mix,
                      PrecoderSet& precoders, FaultInjection fault) {
  const FrameConfig& frame = precoders.frame();
  for (int r = 1; r <= frame.rounds(3); ++r) {
    const auto& served = frame.served(3, r);
    for (int user : served) {
      CMatrix v = CMatrix::Zero(precoders.m() * frame.slots(3), precoders.b());
      for (const Phase3Term& term : phase3_terms(served, user)) {
        double sign = 1.0;
        if (fault == FaultInjection::kPhase3SignFlip && user == served[2] && term.sigma == 3) sign = -1.0;
        v += sign * mix.phase3[r - 1][term.sigma - 1] * t_rows.at(term.row);
      }
      precoders.set(user, 3, r, std::move(v));
    }
    precoders.normalize_round(3, r);
  }
}

std::map<RowLabel, CMatrix> compute_W_rows(const CsitView& csit, const PrecoderSet& precoders) {
  const FrameConfig& frame = precoders.frame();
  std::map<RowLabel, CMatrix> rows;
  for (int listener = 1; listener <= kNumUsers; ++listener) {
    const int r = frame.listening_round_phase3(listener);
    for (int symbol : frame.served(3, r)) {
      rows[RowLabel::W(listener, symbol)] =
          csit.block(listener, cell_of(symbol), 3, r) * precoders.V(symbol, 3, r);
    }
  }
  return rows;
}

void phase4_precoders(const std::map<RowLabel, CMatrix>& w_rows, const MixCoefficients& mix,
                      PrecoderSet& precoders) {
  const FrameConfig& frame = precoders.frame();
  for (int user = 1; user <= kNumUsers; ++user) {
    CMatrix v = CMatrix::Zero(precoders.m() * frame.slots(4), precoders.b());
    for (const RowLabel& w : phase4_terms(user)) v += mix.phase4[w.owner - 1] * w_rows.at(w);
    precoders.set(user, 4, 1, std::move(v));
  }
  precoders.normalize_round(4, 1);
}

PrecoderBuild build_precoders(const ChannelSet& channels, std::uint64_t seed, AccessLog* log,
                              FaultInjection fault) {
  const FrameConfig& frame = channels.frame();
  if (channels.m() != 4 || channels.n() != 1 || frame.slot_counts() != kSchemeSlots) {
    throw std::invalid_argument("the precoder design covers (M,N) = (4,1), S = (3,1,1,6) only");
  }
  PrecoderBuild out{PrecoderSet(frame, channels.m(), kSchemeSymbols),
                    MixCoefficients::draw(seed, frame, channels.m()), {}};
  PrecoderSet& pre = out.precoders;

  const auto v1 = phase1_precoders(seed, kSchemeSymbols);
  for (int user = 1; user <= kNumUsers; ++user) {
    pre.set(user, 1, frame.round_of(1, {user}), v1[user - 1]);
  }

  std::map<RowLabel, CMatrix> t_blocks;
  {
    const CsitView csit = csit_view(channels, 2, "compute_T", log);
    for (int j = 1; j <= kNumUsers; ++j) {
      for (int i = 1; i <= kNumUsers; ++i) {
        if (i == j) continue;
        OhiRow row = compute_T(csit, pre, j, i);
        t_blocks.emplace(row.label, std::move(row.rows));
      }
    }
  }
  if (fault == FaultInjection::kPhase2SameStageCsi) {
    csit_view(channels, 2, "phase2_precoders", log).block(1, 1, 2, 1);
  }
  phase2_precoders(t_blocks, out.mix, pre);

  const auto t_rows = compute_t_rows(csit_view(channels, 3, "compute_t_rows", log), pre);
  phase3_precoders(t_rows, out.mix, pre, fault);

  const auto w_rows = compute_W_rows(csit_view(channels, 4, "compute_W_rows", log), pre);
  phase4_precoders(w_rows, out.mix, pre);

  out.ohi = t_blocks;
  out.ohi.insert(t_rows.begin(), t_rows.end());
  out.ohi.insert(w_rows.begin(), w_rows.end());
  return out;
}

}  // namespace ria
