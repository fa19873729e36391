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

#ifndef MEMAUDIT_METRICS_CLASSIFICATION_H_
#define MEMAUDIT_METRICS_CLASSIFICATION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/json.h"
#include "core/labels.h"

namespace memaudit::metrics {

using PairKey = std::pair<std::string, std::string>;  // (train_id, synth_id)

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

struct ConfusionSummary {
  ConfusionCounts counts;
  std::optional<double> sensitivity;  // absent when no copy labels
  std::optional<double> specificity;  // absent when no novel labels
};

// Scores the latest label per (pair, labeler) against predicted copy flags.
// Every labeled pair must have a prediction.
ConfusionSummary Confusion(const std::vector<LabelRecord>& labels,
                           const std::map<PairKey, bool>& predicted_copy);

struct RocPoint {
  double percentile_u = 0.0;
  double tau = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // ordered by percentile_u
};

// For each u in `u_grid` (sorted ascending), tau_u = Percentile(calibration,
// u) and a pair is predicted a copy iff its rho >= tau_u. Both classes must
// be present among the labels.
RocCurve Roc(const std::vector<LabelRecord>& labels,
             const std::map<PairKey, float>& rho,
             std::vector<double> u_grid, std::span<const float> calibration);

Json ToJson(const ConfusionSummary& s);
Json ToJson(const RocCurve& roc);
// Header "u,tau,fpr,tpr".
std::string ToCsv(const RocCurve& roc);

}  // namespace memaudit::metrics

#endif  // MEMAUDIT_METRICS_CLASSIFICATION_H_
