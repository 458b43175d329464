// SPDX-License-Identifier: Apache-2.0

#include "ria/channel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ria/linalg.hpp"
#include "ria/rng.hpp"

namespace ria {

std::string ChannelKey::str() const {
  std::ostringstream os;
  os << rx << '.' << bs << '.' << phase << '.' << round << '.' << slot;
  return os.str();
}

ChannelKey ChannelKey::parse(const std::string& text) {
  ChannelKey k;
  char d1 = 0, d2 = 0, d3 = 0, d4 = 0;
  std::istringstream is(text);
  if (!(is >> k.rx >> d1 >> k.bs >> d2 >> k.phase >> d3 >> k.round >> d4 >> k.slot) ||
      d1 != '.' || d2 != '.' || d3 != '.' || d4 != '.' || !is.eof()) {
    throw std::invalid_argument("malformed channel key '" + text + "'");
  }
  return k;
}

ChannelSet ChannelSet::generate(std::uint64_t seed, const FrameConfig& frame, int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("antenna counts must be >= 1");
  ChannelSet cs(frame, m, n, seed);
  for (int j = 1; j <= kNumUsers; ++j) {
    for (int i = 1; i <= kNumCells; ++i) {
      for (const RoundId& id : frame.all_rounds()) {
        for (int s = 1; s <= frame.slots(id.phase); ++s) {
          const auto key = derive_key({seed, static_cast<std::uint64_t>(Stream::kChannel),
                                       std::uint64_t(j), std::uint64_t(i),
                                       std::uint64_t(id.phase), std::uint64_t(id.round),
                                       std::uint64_t(s)});
          cs.entries_.emplace(ChannelKey{j, i, id.phase, id.round, s}, complex_gaussian(key, n, m));
        }
      }
    }
  }
  return cs;
}

const CMatrix& ChannelSet::slot(int rx, int bs, int phase, int round, int slot) const {
  auto it = entries_.find(ChannelKey{rx, bs, phase, round, slot});
  if (it == entries_.end()) {
    throw std::out_of_range("no channel " + ChannelKey{rx, bs, phase, round, slot}.str());
  }
  return it->second;
}

CMatrix ChannelSet::block(int rx, int bs, int phase, int round) const {
  const int sp = frame_.slots(phase);
  frame_.served(phase, round);  // range check
  std::vector<CMatrix> blocks;
  blocks.reserve(sp);
  for (int s = 1; s <= sp; ++s) blocks.push_back(slot(rx, bs, phase, round, s));
  return linalg::block_diagonal(blocks);
}

bool ChannelSet::operator==(const ChannelSet& other) const {
  if (!(frame_ == other.frame_) || m_ != other.m_ || n_ != other.n_ || seed_ != other.seed_ ||
      entries_.size() != other.entries_.size()) {
    return false;
  }
  return std::equal(entries_.begin(), entries_.end(), other.entries_.begin(),
                    [](const auto& a, const auto& b) {
                      return a.first == b.first && a.second.rows() == b.second.rows() &&
                             a.second.cols() == b.second.cols() && a.second == b.second;
                    });
}

nlohmann::json ChannelSet::to_json() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [key, mat] : entries_) {
    nlohmann::json cells = nlohmann::json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        cells.push_back({mat(r, c).real(), mat(r, c).imag()});
      }
    }
    entries[key.str()] = std::move(cells);
  }
  return {{"M", m_}, {"N", n_}, {"seed", seed_}, {"slots", frame_.slot_counts()},
          {"entries", std::move(entries)}};
}

ChannelSet ChannelSet::from_json(const nlohmann::json& j) {
  const auto slots = j.at("slots").get<std::array<int, kNumPhases>>();
  ChannelSet cs(build_frame(slots), j.at("M").get<int>(), j.at("N").get<int>(),
                j.at("seed").get<std::uint64_t>());
  for (const auto& [text, cells] : j.at("entries").items()) {
    if (cells.size() != static_cast<std::size_t>(cs.m_ * cs.n_)) {
      throw std::invalid_argument("channel " + text + " has the wrong entry count");
    }
    CMatrix mat(cs.n_, cs.m_);
    std::size_t k = 0;
    for (int r = 0; r < cs.n_; ++r) {
      for (int c = 0; c < cs.m_; ++c, ++k) {
        mat(r, c) = cd(cells[k].at(0).get<double>(), cells[k].at(1).get<double>());
      }
    }
    cs.entries_.emplace(ChannelKey::parse(text), std::move(mat));
  }
  return cs;
}

void ChannelSet::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json().dump() << '\n';
}

ChannelSet ChannelSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return from_json(nlohmann::json::parse(in));
}

CMatrix block_channel(const ChannelSet& cs, int rx, int bs, int phase, int round) {
  return cs.block(rx, bs, phase, round);
}

std::size_t AccessLog::violations() const {
  return static_cast<std::size_t>(
      std::count_if(accesses.begin(), accesses.end(), [](const auto& a) { return a.violation; }));
}

CsitView::CsitView(const ChannelSet& cs, int current_phase, std::string op, AccessLog* log)
    : cs_(&cs), current_phase_(current_phase), op_(std::move(op)), log_(log) {
  if (current_phase < 1 || current_phase > kNumPhases) {
    throw std::out_of_range("CSIT view phase must be 1..4");
  }
}

void CsitView::admit(int rx, int bs, int phase, int round) const {
  const bool violation = phase >= current_phase_;
  if (log_ != nullptr) log_->accesses.push_back({op_, current_phase_, rx, bs, phase, round, violation});
  if (violation) throw CsitViolation(current_phase_, phase, op_);
}

CMatrix CsitView::block(int rx, int bs, int phase, int round) const {
  admit(rx, bs, phase, round);
  return cs_->block(rx, bs, phase, round);
}

const CMatrix& CsitView::slot(int rx, int bs, int phase, int round, int slot) const {
  admit(rx, bs, phase, round);
  return cs_->slot(rx, bs, phase, round, slot);
}

CsitView csit_view(const ChannelSet& cs, int current_phase, std::string op, AccessLog* log) {
  return CsitView(cs, current_phase, std::move(op), log);
}

}  // namespace ria
