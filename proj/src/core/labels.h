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

#ifndef MEMAUDIT_CORE_LABELS_H_
#define MEMAUDIT_CORE_LABELS_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace memaudit {

enum class BinaryLabel { kNovel, kCopy };
// a: not a copy; b: copy with minor structural variations;
// c: exact copy up to rotation/flip/contrast.
enum class Grade { kA, kB, kC };

struct LabelRecord {
  std::string train_id;
  std::string synth_id;
  std::optional<BinaryLabel> binary_label;
  std::optional<Grade> grade;
  std::string labeler;
  std::int64_t timestamp = 0;  // UTC seconds

  // Binary label if present, otherwise a -> novel and b/c -> copy.
  BinaryLabel EffectiveLabel() const;
  bool operator==(const LabelRecord&) const = default;
};

void Validate(const LabelRecord& record);

nlohmann::ordered_json ToJson(const LabelRecord& record);
LabelRecord LabelFromJson(const nlohmann::ordered_json& j);

std::string_view BinaryLabelName(BinaryLabel label);
std::string_view GradeName(Grade grade);

// Latest record per (train_id, synth_id, labeler). Later records win; within
// equal timestamps the one appended later wins. Output is sorted by key.
std::vector<LabelRecord> LatestLabels(const std::vector<LabelRecord>& history);

// Append-only JSON-Lines store. Each Append is flushed and fsync'd before
// returning. Thread-safe.
class LabelStore {
 public:
  explicit LabelStore(std::filesystem::path path);

  // Full history in file order.
  std::vector<LabelRecord> History() const;
  std::vector<LabelRecord> Latest() const { return LatestLabels(History()); }
  void Append(const LabelRecord& record);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::vector<LabelRecord> history_;
};

std::vector<LabelRecord> ReadLabels(const std::filesystem::path& path);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_LABELS_H_
