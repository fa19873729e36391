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

#include "metrics/classification.h"

#include <algorithm>
#include <cstdio>

#include "core/error.h"
#include "detection/detection.h"

namespace memaudit::metrics {
namespace {

std::optional<double> Ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

ConfusionSummary Confusion(const std::vector<LabelRecord>& labels,
                           const std::map<PairKey, bool>& predicted_copy) {
  ConfusionSummary s;
  for (const auto& r : LatestLabels(labels)) {
    auto it = predicted_copy.find({r.train_id, r.synth_id});
    Check(it != predicted_copy.end(), ErrorCode::kNotFound,
          "no prediction for labeled pair (" + r.train_id + ", " + r.synth_id +
              ")");
    const bool truth_copy = r.EffectiveLabel() == BinaryLabel::kCopy;
    const bool pred_copy = it->second;
    if (truth_copy && pred_copy) ++s.counts.tp;
    if (truth_copy && !pred_copy) ++s.counts.fn;
    if (!truth_copy && pred_copy) ++s.counts.fp;
    if (!truth_copy && !pred_copy) ++s.counts.tn;
  }
  s.sensitivity = Ratio(s.counts.tp, s.counts.tp + s.counts.fn);
  s.specificity = Ratio(s.counts.tn, s.counts.tn + s.counts.fp);
  return s;
}

RocCurve Roc(const std::vector<LabelRecord>& labels,
             const std::map<PairKey, float>& rho, std::vector<double> u_grid,
             std::span<const float> calibration) {
  Check(!u_grid.empty(), ErrorCode::kInvalidArgument, "empty percentile grid");
  std::sort(u_grid.begin(), u_grid.end());
  RocCurve roc;
  for (double u : u_grid) {
    const double tau = detection::Percentile(calibration, u);
    std::map<PairKey, bool> predicted;
    for (const auto& [key, value] : rho) {
      predicted[key] = static_cast<double>(value) >= tau;
    }
    const ConfusionSummary s = Confusion(labels, predicted);
    Check(s.sensitivity.has_value() && s.specificity.has_value(),
          ErrorCode::kInvalidArgument,
          "ROC needs both copy and novel labels");
    roc.points.push_back({u, tau, 1.0 - *s.specificity, *s.sensitivity});
  }
  return roc;
}

Json ToJson(const ConfusionSummary& s) {
  Json j;
  j["tp"] = s.counts.tp;
  j["fp"] = s.counts.fp;
  j["tn"] = s.counts.tn;
  j["fn"] = s.counts.fn;
  j["n_labeled"] = s.counts.total();
  j["sensitivity"] = s.sensitivity ? Json(*s.sensitivity) : Json(nullptr);
  j["specificity"] = s.specificity ? Json(*s.specificity) : Json(nullptr);
  return j;
}

Json ToJson(const RocCurve& roc) {
  Json pts = Json::array();
  for (const auto& p : roc.points) {
    Json o;
    o["percentile_u"] = p.percentile_u;
    o["tau"] = p.tau;
    o["fpr"] = p.fpr;
    o["tpr"] = p.tpr;
    pts.push_back(o);
  }
  Json j;
  j["points"] = pts;
  return j;
}

std::string ToCsv(const RocCurve& roc) {
  std::string out = "u,tau,fpr,tpr\n";
  for (const auto& p : roc.points) {
    out += Fixed(p.percentile_u) + "," + Fixed(p.tau) + "," + Fixed(p.fpr) +
           "," + Fixed(p.tpr) + "\n";
  }
  return out;
}

}  // namespace memaudit::metrics
