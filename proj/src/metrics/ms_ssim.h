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

#ifndef MEMAUDIT_METRICS_MS_SSIM_H_
#define MEMAUDIT_METRICS_MS_SSIM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core/tensor.h"

namespace memaudit::metrics {

// Single-channel plane in double precision.
struct Plane {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};

struct SsimStats {
  double ssim = 0.0;  // mean of the full SSIM map
  double cs = 0.0;    // mean of the contrast-structure map
};

// SSIM with an 11x11 Gaussian window (sigma 1.5), valid region only,
// K1 = 0.01, K2 = 0.03, dynamic range 1.
SsimStats Ssim(const Plane& a, const Plane& b);

// 2x2 mean pooling; odd trailing rows/cols are dropped.
Plane Downsample(const Plane& p);

// Scales usable for a plane whose smaller side is `min_side`: the largest
// s <= requested with min_side >= 11 * 2^(s-1). Zero if even one scale does
// not fit.
int UsableScales(std::size_t min_side, int requested);

// Multi-scale SSIM with weights (0.0448, 0.2856, 0.3001, 0.2363, 0.1333):
// contrast-structure at every scale but the coarsest, full SSIM at the
// coarsest, each clamped at 0 before exponentiation. Fewer scales use the
// leading weights renormalized to sum 1 (with a warning). 3D tensors are
// scored per slice along the first axis and averaged.
double MsSsim(const ImageTensor& a, const ImageTensor& b, int scales = 5);

// Partner of sample i: uniform over the other n-1 samples, drawn from
// Rng(seed).Split(i).
std::vector<std::size_t> DiversityPartners(std::size_t n, std::uint64_t seed);

// Mean MS-SSIM between every sample and its random partner.
double DiversityMsSsim(const std::vector<ImageTensor>& samples,
                       std::uint64_t seed, int scales = 5);

}  // namespace memaudit::metrics

#endif  // MEMAUDIT_METRICS_MS_SSIM_H_
