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

#ifndef MEMAUDIT_METRICS_FID_H_
#define MEMAUDIT_METRICS_FID_H_

#include <cstddef>
#include <vector>

#include "core/json.h"
#include "core/vector_set.h"

namespace memaudit::metrics {

struct GaussianSummary {
  std::vector<double> mu;     // length L
  std::vector<double> sigma;  // L x L, row-major

  std::size_t dim() const { return mu.size(); }
};

// Column means and unbiased (divisor N - 1) covariance. Requires N >= 2.
GaussianSummary SummarizeGaussian(const VectorSet& set);

// Throws kInvalidArgument unless sigma is square, finite and symmetric
// within 1e-6.
void Validate(const GaussianSummary& g);

// Squared Frechet distance
//   |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2).
// Eigenvalues in [-1e-6, 0) are clamped to 0; below -1e-6 throws kNumerical.
double FrechetDistance(const GaussianSummary& a, const GaussianSummary& b);

Json ToJson(const GaussianSummary& g);

}  // namespace memaudit::metrics

#endif  // MEMAUDIT_METRICS_FID_H_
