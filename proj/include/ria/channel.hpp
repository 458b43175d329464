// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ria/frame.hpp"

namespace ria {

// Receiver j, transmitting BS i, phase p, round r, slot s (all 1-based).
struct ChannelKey {
  int rx = 0;
  int bs = 0;
  int phase = 0;
  int round = 0;
  int slot = 0;
  auto operator<=>(const ChannelKey&) const = default;

  std::string str() const;  // "j.i.p.r.s"
  static ChannelKey parse(const std::string& text);
};

// Every per-slot N x M block-fading matrix of one frame, i.i.d. CN(0,1).
// Immutable after generation.
class ChannelSet {
 public:
  static ChannelSet generate(std::uint64_t seed, const FrameConfig& frame, int m, int n);

  const CMatrix& slot(int rx, int bs, int phase, int round, int slot) const;

  // (N S_p) x (M S_p) block-diagonal channel of one round.
  CMatrix block(int rx, int bs, int phase, int round) const;

  int m() const { return m_; }
  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  const FrameConfig& frame() const { return frame_; }
  const std::map<ChannelKey, CMatrix>& entries() const { return entries_; }

  bool operator==(const ChannelSet& other) const;

  nlohmann::json to_json() const;
  static ChannelSet from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static ChannelSet load(const std::filesystem::path& path);

 private:
  ChannelSet(FrameConfig frame, int m, int n, std::uint64_t seed)
      : frame_(std::move(frame)), m_(m), n_(n), seed_(seed) {}

  FrameConfig frame_;
  int m_;
  int n_;
  std::uint64_t seed_;
  std::map<ChannelKey, CMatrix> entries_;
};

CMatrix block_channel(const ChannelSet& cs, int rx, int bs, int phase, int round);

// One channel query made through a CsitView.
struct ChannelAccess {
  std::string op;
  int view_phase = 0;
  int rx = 0;
  int bs = 0;
  int phase = 0;
  int round = 0;
  bool violation = false;
};

// Instrumentation sink shared by the views of one precoder build.
struct AccessLog {
  std::vector<ChannelAccess> accesses;

  std::size_t violations() const;
};

// Transmitter-side window on a ChannelSet: at the start of phase p only the
// channels of phases < p are known.
class CsitView {
 public:
  CsitView(const ChannelSet& cs, int current_phase, std::string op = "csit",
           AccessLog* log = nullptr);

  int current_phase() const { return current_phase_; }
  const std::string& op() const { return op_; }

  // Throws CsitViolation for phase >= current_phase.
  CMatrix block(int rx, int bs, int phase, int round) const;
  const CMatrix& slot(int rx, int bs, int phase, int round, int slot) const;

  const ChannelSet& channels_unchecked() const { return *cs_; }

 private:
  void admit(int rx, int bs, int phase, int round) const;

  const ChannelSet* cs_;
  int current_phase_;
  std::string op_;
  AccessLog* log_;
};

// Validates 1 <= current_phase <= 4.
CsitView csit_view(const ChannelSet& cs, int current_phase, std::string op = "csit",
                   AccessLog* log = nullptr);

}  // namespace ria
