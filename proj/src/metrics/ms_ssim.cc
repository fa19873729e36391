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

#include "metrics/ms_ssim.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "core/error.h"
#include "core/log.h"
#include "core/parallel.h"
#include "core/rng.h"

namespace memaudit::metrics {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;
constexpr std::array<double, 5> kScaleWeights = {0.0448, 0.2856, 0.3001,
                                                 0.2363, 0.1333};

const std::array<double, kWindow>& GaussianTaps() {
  static const std::array<double, kWindow> taps = [] {
    std::array<double, kWindow> t{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
      const double x = i - kWindow / 2;
      t[i] = std::exp(-(x * x) / (2.0 * kSigma * kSigma));
      sum += t[i];
    }
    for (double& v : t) v /= sum;
    return t;
  }();
  return taps;
}

// Separable valid-mode Gaussian filter.
Plane Filter(const Plane& p) {
  const auto& g = GaussianTaps();
  const std::size_t out_r = p.rows - kWindow + 1;
  const std::size_t out_c = p.cols - kWindow + 1;
  std::vector<double> tmp(p.rows * out_c);
  for (std::size_t r = 0; r < p.rows; ++r) {
    for (std::size_t c = 0; c < out_c; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * p.values[r * p.cols + c + k];
      tmp[r * out_c + c] = s;
    }
  }
  Plane out{out_r, out_c, std::vector<double>(out_r * out_c)};
  for (std::size_t r = 0; r < out_r; ++r) {
    for (std::size_t c = 0; c < out_c; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * tmp[(r + k) * out_c + c];
      out.values[r * out_c + c] = s;
    }
  }
  return out;
}

Plane Product(const Plane& a, const Plane& b) {
  Plane out{a.rows, a.cols, std::vector<double>(a.values.size())};
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out.values[i] = a.values[i] * b.values[i];
  }
  return out;
}

double MsSsimPlanes(Plane a, Plane b, int scales) {
  std::vector<double> weights(kScaleWeights.begin(),
                              kScaleWeights.begin() + scales);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  double result = 1.0;
  for (int s = 0; s < scales; ++s) {
    const SsimStats st = Ssim(a, b);
    const bool coarsest = s == scales - 1;
    const double term = std::max(0.0, coarsest ? st.ssim : st.cs);
    result *= std::pow(term, weights[s]);
    if (!coarsest) {
      a = Downsample(a);
      b = Downsample(b);
    }
  }
  return result;
}

Plane SliceOf(const ImageTensor& img, std::size_t slice) {
  const bool is3d = img.ndim() == 3;
  const std::size_t rows = img.dims()[is3d ? 1 : 0];
  const std::size_t cols = img.dims()[is3d ? 2 : 1];
  const auto v = img.values().subspan(slice * rows * cols, rows * cols);
  return Plane{rows, cols, std::vector<double>(v.begin(), v.end())};
}

}  // namespace

SsimStats Ssim(const Plane& a, const Plane& b) {
  Check(a.rows == b.rows && a.cols == b.cols, ErrorCode::kInvalidArgument,
        "SSIM: plane size mismatch");
  Check(a.rows >= kWindow && a.cols >= kWindow, ErrorCode::kInvalidArgument,
        "SSIM: image too small for one scale");
  const Plane mu_a = Filter(a), mu_b = Filter(b);
  const Plane aa = Filter(Product(a, a)), bb = Filter(Product(b, b)),
              ab = Filter(Product(a, b));
  double ssim_sum = 0.0, cs_sum = 0.0;
  const std::size_t n = mu_a.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = mu_a.values[i], mb = mu_b.values[i];
    const double va = aa.values[i] - ma * ma;
    const double vb = bb.values[i] - mb * mb;
    const double cov = ab.values[i] - ma * mb;
    const double cs = (2.0 * cov + kC2) / (va + vb + kC2);
    const double lum = (2.0 * ma * mb + kC1) / (ma * ma + mb * mb + kC1);
    cs_sum += cs;
    ssim_sum += lum * cs;
  }
  return {ssim_sum / static_cast<double>(n), cs_sum / static_cast<double>(n)};
}

Plane Downsample(const Plane& p) {
  Plane out{p.rows / 2, p.cols / 2, {}};
  out.values.resize(out.rows * out.cols);
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      const std::size_t r0 = 2 * r, c0 = 2 * c;
      out.values[r * out.cols + c] =
          0.25 * (p.values[r0 * p.cols + c0] + p.values[r0 * p.cols + c0 + 1] +
                  p.values[(r0 + 1) * p.cols + c0] +
                  p.values[(r0 + 1) * p.cols + c0 + 1]);
    }
  }
  return out;
}

int UsableScales(std::size_t min_side, int requested) {
  int s = 0;
  while (s < requested &&
         min_side >= static_cast<std::size_t>(kWindow) << s) {
    ++s;
  }
  return s;
}

double MsSsim(const ImageTensor& a, const ImageTensor& b, int scales) {
  Check(a.dims() == b.dims(), ErrorCode::kInvalidArgument,
        "MS-SSIM: dims mismatch");
  Check(scales >= 1 && scales <= static_cast<int>(kScaleWeights.size()),
        ErrorCode::kInvalidArgument, "MS-SSIM: scales must be in [1, 5]");
  const bool is3d = a.ndim() == 3;
  const std::size_t rows = a.dims()[is3d ? 1 : 0];
  const std::size_t cols = a.dims()[is3d ? 2 : 1];
  const int usable = UsableScales(std::min(rows, cols), scales);
  Check(usable >= 1, ErrorCode::kInvalidArgument,
        "MS-SSIM: image too small for one scale (need >= 11 px per side)");
  if (usable < scales) {
    Warn("MS-SSIM: " + std::to_string(rows) + "x" + std::to_string(cols) +
         " image supports " + std::to_string(usable) + " of " +
         std::to_string(scales) + " scales; using " + std::to_string(usable));
  }
  const std::size_t slices = is3d ? a.dims()[0] : 1;
  double sum = 0.0;
  for (std::size_t s = 0; s < slices; ++s) {
    sum += MsSsimPlanes(SliceOf(a, s), SliceOf(b, s), usable);
  }
  return sum / static_cast<double>(slices);
}

std::vector<std::size_t> DiversityPartners(std::size_t n, std::uint64_t seed) {
  Check(n >= 2, ErrorCode::kInvalidArgument,
        "diversity needs at least 2 samples");
  const Rng root(seed);
  std::vector<std::size_t> partners(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = root.Split(i);
    std::size_t j = static_cast<std::size_t>(rng.Below(n - 1));
    if (j >= i) ++j;
    partners[i] = j;
  }
  return partners;
}

double DiversityMsSsim(const std::vector<ImageTensor>& samples,
                       std::uint64_t seed, int scales) {
  const auto partners = DiversityPartners(samples.size(), seed);
  std::vector<double> scores(samples.size());
  {
    // One warning for the whole set rather than one per pair.
    ScopedWarningCapture quiet;
    ParallelFor(samples.size(), 0, [&](std::size_t i) {
      scores[i] = MsSsim(samples[i], samples[partners[i]], scales);
    });
  }
  const auto& d = samples.front().dims();
  const std::size_t side = std::min(d[d.size() - 2], d[d.size() - 1]);
  if (UsableScales(side, scales) < scales) {
    Warn("MS-SSIM diversity: images support only " +
         std::to_string(UsableScales(side, scales)) + " scale(s)");
  }
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace memaudit::metrics
