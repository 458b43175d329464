// SPDX-License-Identifier: Apache-2.0

#include "ria/rng.hpp"

#include <cmath>
#include <random>

namespace ria {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

CMatrix complex_gaussian(std::uint64_t key, Eigen::Index rows, Eigen::Index cols) {
  std::mt19937_64 gen(key);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = normal(gen);
      const double im = normal(gen);
      m(r, c) = cd(re, im);
    }
  }
  return m;
}

}  // namespace ria
