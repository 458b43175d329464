// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

#include "ria/types.hpp"

namespace ria {

// Independent random streams drawn from one trial seed.
enum class Stream : std::uint64_t {
  kChannel = 0x43484e4c,
  kPhase1Precoder = 0x50524531,
  kMixing = 0x4d495849,
  kSymbols = 0x53594d42,
};

// Counter-based key derivation: the same parts always give the same key,
// regardless of the order in which keys are requested.
std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts);

// rows x cols matrix of i.i.d. CN(0,1) entries, filled row-major from `key`.
CMatrix complex_gaussian(std::uint64_t key, Eigen::Index rows, Eigen::Index cols);

}  // namespace ria
