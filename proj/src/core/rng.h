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

#ifndef MEMAUDIT_CORE_RNG_H_
#define MEMAUDIT_CORE_RNG_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace memaudit {

// Counter-based, splittable generator. This is the only randomness source in
// the toolkit.
//
//   Mix(z)       = SplitMix64 finalizer:
//                    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//                    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//                    z =  z ^ (z >> 31)
//   key          = Mix(seed)
//   draw #c      = Mix(key + (c + 1) * 0x9E3779B97F4A7C15), c = 0, 1, ...
//   Split(tag)   = generator with key Mix(key ^ Mix(tag + 0x9E3779B97F4A7C15))
//
// Uniform() takes the top 53 bits of a draw. Normal() is Box-Muller using two
// uniforms and the cosine branch only, so every normal consumes two draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64();

  // Independent child stream; does not advance this generator.
  Rng Split(std::uint64_t tag) const;

  // [0, 1)
  double Uniform();
  // [lo, hi)
  double Uniform(double lo, double hi);
  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);
  bool Bernoulli(double p);
  double Normal();

  // Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> Permutation(std::size_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  struct FromKey {};
  Rng(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t Mix64(std::uint64_t z);

// Seed of the `index`-th item of stream `tag` under `seed`.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t index);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_RNG_H_
