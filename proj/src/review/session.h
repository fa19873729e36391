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

#ifndef MEMAUDIT_REVIEW_SESSION_H_
#define MEMAUDIT_REVIEW_SESSION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/json.h"
#include "core/labels.h"
#include "detection/detection.h"
#include "metrics/classification.h"

namespace memaudit::review {

struct ReviewPair {
  std::string train_id;
  std::string synth_id;
  float rho = 0.0f;
  bool predicted_copy = false;
  bool operator==(const ReviewPair&) const = default;
};

// Every training row with its nearest synthetic sample, ordered by rho
// descending; ties keep training order.
std::vector<ReviewPair> PairQueue(const detection::AuditReport& report);

// Uniform seeded sample of n pairs without replacement: a partial
// Fisher-Yates shuffle of the indices with Rng(seed).Below, after which the
// chosen indices are returned in ascending order so the input ordering is
// kept. n == pairs.size() returns the input unchanged.
std::vector<std::size_t> SampleIndices(std::size_t total, std::size_t n,
                                       std::uint64_t seed);
std::vector<ReviewPair> SamplePairs(const std::vector<ReviewPair>& pairs,
                                    std::size_t n, std::uint64_t seed);

enum class PairStatus { kPending, kLabeled, kAll };
PairStatus ParsePairStatus(const std::string& s);

// Looks up <dir>/<id>.mimg in each directory in order.
class ImageResolver {
 public:
  explicit ImageResolver(std::vector<std::filesystem::path> dirs);
  // kInvalidArgument for ids with path syntax, kNotFound if absent.
  std::filesystem::path Resolve(const std::string& id) const;

 private:
  std::vector<std::filesystem::path> dirs_;
};

struct SessionOptions {
  std::filesystem::path report_path;
  std::vector<std::filesystem::path> image_dirs;
  std::filesystem::path labels_path;
  // Review only a seeded random subset of the queue.
  std::optional<std::size_t> sample_n;
  std::uint64_t sample_seed = 0;
};

// Queue, label store and image lookup behind the review service. All
// methods are thread-safe; label writes go through the store's single
// writer.
class ReviewSession {
 public:
  ReviewSession(detection::AuditReport report, SessionOptions options);
  static std::unique_ptr<ReviewSession> Open(SessionOptions options);

  const std::vector<ReviewPair>& pairs() const { return pairs_; }
  const detection::AuditReport& report() const { return report_; }

  bool IsLabeled(std::size_t index) const;
  std::vector<std::size_t> Select(PairStatus status) const;
  std::optional<std::size_t> Find(const std::string& train_id,
                                  const std::string& synth_id) const;

  // Validates that the pair belongs to the session, then appends durably.
  // A zero timestamp is replaced by the current UTC time.
  LabelRecord AddLabel(LabelRecord record);
  std::vector<LabelRecord> LabelsFor(std::size_t index) const;

  // Latest labels on session pairs scored against the session's copy flags.
  metrics::ConfusionSummary Metrics() const;

  std::filesystem::path ImagePath(const std::string& id) const;

  Json SessionJson() const;
  Json PairJson(std::size_t index) const;
  Json PairsJson(PairStatus status) const;
  Json MetricsJson() const;

 private:
  detection::AuditReport report_;
  SessionOptions options_;
  std::vector<ReviewPair> pairs_;
  std::map<metrics::PairKey, std::size_t> index_;
  ImageResolver images_;
  LabelStore store_;
};

}  // namespace memaudit::review

#endif  // MEMAUDIT_REVIEW_SESSION_H_
