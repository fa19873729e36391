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

#include "corpus/scoring.h"

#include <map>

#include "core/error.h"

namespace memaudit::corpus {
namespace {

std::optional<double> Ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

Json OptionalJson(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json ToJson(const ClassBreakdown& b) {
  Json j;
  j["total"] = b.total;
  j["flagged"] = b.flagged;
  j["source_matched"] = b.source_matched;
  return j;
}

}  // namespace

DetectorScore ScoreDetector(const GroundTruth& truth,
                            const detection::AuditReport& report) {
  Check(report.n_synth == truth.size(), ErrorCode::kInvalidArgument,
        "id mismatch: report covers " + std::to_string(report.n_synth) +
            " synthetic samples, truth has " + std::to_string(truth.size()));
  std::map<std::string, const SynthTruth*> by_id;
  DetectorScore score;
  for (const auto& t : truth) {
    by_id[t.synth_id] = &t;
    ClassBreakdown& b = t.origin == Origin::kNovel       ? score.novel
                        : t.origin == Origin::kExactCopy ? score.exact
                                                         : score.augmented;
    ++b.total;
  }
  for (const auto& flag : report.copies) {
    auto it = by_id.find(flag.synth_id);
    Check(it != by_id.end(), ErrorCode::kInvalidArgument,
          "id mismatch: " + flag.synth_id + " is not in the ground truth");
    const SynthTruth& t = *it->second;
    ClassBreakdown& b = t.origin == Origin::kNovel       ? score.novel
                        : t.origin == Origin::kExactCopy ? score.exact
                                                         : score.augmented;
    ++b.flagged;
    if (t.origin != Origin::kNovel && flag.train_id == t.source_train_id) {
      ++b.source_matched;
    }
  }
  score.recall_exact = Ratio(score.exact.flagged, score.exact.total);
  score.recall_aug = Ratio(score.augmented.flagged, score.augmented.total);
  const std::size_t flagged =
      score.novel.flagged + score.exact.flagged + score.augmented.flagged;
  score.precision =
      Ratio(score.exact.flagged + score.augmented.flagged, flagged);
  return score;
}

Json ToJson(const DetectorScore& s) {
  Json j;
  j["recall_exact"] = OptionalJson(s.recall_exact);
  j["recall_aug"] = OptionalJson(s.recall_aug);
  j["precision"] = OptionalJson(s.precision);
  j["novel"] = ToJson(s.novel);
  j["exact"] = ToJson(s.exact);
  j["augmented"] = ToJson(s.augmented);
  return j;
}

}  // namespace memaudit::corpus
