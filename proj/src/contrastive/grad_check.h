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

#ifndef MEMAUDIT_CONTRASTIVE_GRAD_CHECK_H_
#define MEMAUDIT_CONTRASTIVE_GRAD_CHECK_H_

#include <functional>
#include <span>
#include <vector>

#include "contrastive/encoder.h"

namespace memaudit::contrastive {

// Input rows of a batch, ordered [y1, y1', y2, y2', ...].
struct InputBatch {
  std::span<const float> data;
  std::size_t dim = 0;
};

// Mean NT-Xent loss of the network on `batch` at double-precision `params`.
double BatchLoss(const Network& net, std::span<const double> params,
                 InputBatch batch, double tau_temp);

// d(BatchLoss)/d(params) by backpropagation.
using GradientFn = std::function<std::vector<double>(
    const Network&, std::span<const double>, InputBatch, double)>;
std::vector<double> AnalyticGradient(const Network& net,
                                     std::span<const double> params,
                                     InputBatch batch, double tau_temp);

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
};

// Compares the analytic gradient against central differences (step 1e-5) on
// a double copy of the model parameters. Relative error per parameter is
// |a - n| / max(|a|, |n|, 1e-3 * max_k |n_k|, 1e-8).
GradCheckResult GradCheck(const EncoderModel& model, InputBatch batch,
                          double tau_temp,
                          const GradientFn& analytic = AnalyticGradient);

}  // namespace memaudit::contrastive

#endif  // MEMAUDIT_CONTRASTIVE_GRAD_CHECK_H_
