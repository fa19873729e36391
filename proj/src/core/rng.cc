// Copyright 2026 The MemAudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/rng.h"

#include <cmath>
#include <numbers>

#include "core/error.h"

namespace memaudit {
namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : key_(Mix64(seed)) {}

std::uint64_t Rng::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGamma);
}

Rng Rng::Split(std::uint64_t tag) const {
  return Rng(FromKey{}, Mix64(key_ ^ Mix64(tag + kGamma)));
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

std::uint64_t Rng::Below(std::uint64_t n) {
  Check(n > 0, ErrorCode::kInvalidArgument, "Rng::Below requires n > 0");
  // Reject the partial top bucket.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

bool Rng::Bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return Uniform() < p;
}

double Rng::Normal() {
  const double u1 = 1.0 - Uniform();  // (0, 1]
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> Rng::Permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(Below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t index) {
  return Rng(seed).Split(tag).Split(index).key();
}

}  // namespace memaudit
