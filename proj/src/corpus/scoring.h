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

#ifndef MEMAUDIT_CORPUS_SCORING_H_
#define MEMAUDIT_CORPUS_SCORING_H_

#include <cstddef>
#include <optional>

#include "core/json.h"
#include "corpus/generator.h"
#include "detection/detection.h"

namespace memaudit::corpus {

struct ClassBreakdown {
  std::size_t total = 0;
  std::size_t flagged = 0;
  // Flagged with the planted source as the matched training id.
  std::size_t source_matched = 0;
};

struct DetectorScore {
  std::optional<double> recall_exact;  // absent without exact copies
  std::optional<double> recall_aug;    // absent without augmented copies
  std::optional<double> precision;     // absent when nothing was flagged
  ClassBreakdown novel;
  ClassBreakdown exact;
  ClassBreakdown augmented;
};

// Scores the synthetic-side flags (report.copies) against the planted truth.
// Throws kInvalidArgument if the report mentions ids the truth lacks or its
// synthetic count differs.
DetectorScore ScoreDetector(const GroundTruth& truth,
                            const detection::AuditReport& report);

Json ToJson(const DetectorScore& score);

}  // namespace memaudit::corpus

#endif  // MEMAUDIT_CORPUS_SCORING_H_
