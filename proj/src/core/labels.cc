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

#include "core/labels.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <tuple>

#include "core/error.h"

namespace memaudit {
namespace {

using Key = std::tuple<std::string, std::string, std::string>;

std::optional<BinaryLabel> ParseBinary(std::string_view s) {
  if (s == "novel") return BinaryLabel::kNovel;
  if (s == "copy") return BinaryLabel::kCopy;
  return std::nullopt;
}

std::optional<Grade> ParseGrade(std::string_view s) {
  if (s == "a") return Grade::kA;
  if (s == "b") return Grade::kB;
  if (s == "c") return Grade::kC;
  return std::nullopt;
}

}  // namespace

BinaryLabel LabelRecord::EffectiveLabel() const {
  if (binary_label) return *binary_label;
  Check(grade.has_value(), ErrorCode::kInvalidArgument, "label without value");
  return *grade == Grade::kA ? BinaryLabel::kNovel : BinaryLabel::kCopy;
}

std::string_view BinaryLabelName(BinaryLabel label) {
  return label == BinaryLabel::kCopy ? "copy" : "novel";
}

std::string_view GradeName(Grade grade) {
  switch (grade) {
    case Grade::kA:
      return "a";
    case Grade::kB:
      return "b";
    case Grade::kC:
      return "c";
  }
  return "?";
}

void Validate(const LabelRecord& r) {
  Check(!r.train_id.empty() && !r.synth_id.empty(),
        ErrorCode::kInvalidArgument, "label needs train_id and synth_id");
  Check(!r.labeler.empty(), ErrorCode::kInvalidArgument, "label needs labeler");
  Check(r.binary_label.has_value() || r.grade.has_value(),
        ErrorCode::kInvalidArgument,
        "label needs binary_label or grade");
}

nlohmann::ordered_json ToJson(const LabelRecord& r) {
  nlohmann::ordered_json j;
  j["train_id"] = r.train_id;
  j["synth_id"] = r.synth_id;
  if (r.binary_label) j["binary_label"] = BinaryLabelName(*r.binary_label);
  if (r.grade) j["grade"] = GradeName(*r.grade);
  j["labeler"] = r.labeler;
  j["timestamp"] = r.timestamp;
  return j;
}

LabelRecord LabelFromJson(const nlohmann::ordered_json& j) {
  Check(j.is_object(), ErrorCode::kInvalidArgument, "label must be an object");
  LabelRecord r;
  auto str = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return {};
    Check(it->is_string(), ErrorCode::kInvalidArgument,
          std::string(key) + " must be a string");
    return it->get<std::string>();
  };
  r.train_id = str("train_id");
  r.synth_id = str("synth_id");
  r.labeler = str("labeler");
  if (auto s = str("binary_label"); !s.empty()) {
    r.binary_label = ParseBinary(s);
    Check(r.binary_label.has_value(), ErrorCode::kInvalidArgument,
          "binary_label must be novel or copy");
  }
  if (auto s = str("grade"); !s.empty()) {
    r.grade = ParseGrade(s);
    Check(r.grade.has_value(), ErrorCode::kInvalidArgument,
          "grade must be a, b or c");
  }
  if (auto it = j.find("timestamp"); it != j.end() && !it->is_null()) {
    Check(it->is_number_integer(), ErrorCode::kInvalidArgument,
          "timestamp must be an integer");
    r.timestamp = it->get<std::int64_t>();
  }
  Validate(r);
  return r;
}

std::vector<LabelRecord> LatestLabels(const std::vector<LabelRecord>& history) {
  std::map<Key, const LabelRecord*> latest;
  for (const auto& r : history) {
    auto& slot = latest[{r.train_id, r.synth_id, r.labeler}];
    if (slot == nullptr || r.timestamp >= slot->timestamp) slot = &r;
  }
  std::vector<LabelRecord> out;
  out.reserve(latest.size());
  for (const auto& [key, r] : latest) out.push_back(*r);
  return out;
}

std::vector<LabelRecord> ReadLabels(const std::filesystem::path& path) {
  std::vector<LabelRecord> out;
  std::ifstream in(path);
  if (!in) {
    if (!std::filesystem::exists(path)) return out;
    Throw(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(LabelFromJson(nlohmann::ordered_json::parse(line)));
    } catch (const std::exception& e) {
      Throw(ErrorCode::kFormat, path.string() + ":" + std::to_string(lineno) +
                                    ": " + e.what());
    }
  }
  return out;
}

LabelStore::LabelStore(std::filesystem::path path)
    : path_(std::move(path)), history_(ReadLabels(path_)) {}

std::vector<LabelRecord> LabelStore::History() const {
  std::lock_guard<std::mutex> lock(mu_);
  return history_;
}

void LabelStore::Append(const LabelRecord& record) {
  Validate(record);
  const std::string line = ToJson(record).dump() + "\n";
  std::lock_guard<std::mutex> lock(mu_);
  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) Throw(ErrorCode::kIo, "cannot open " + path_.string());
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
    if (n < 0) {
      ::close(fd);
      Throw(ErrorCode::kIo, "write failed: " + path_.string());
    }
    done += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  Check(synced, ErrorCode::kIo, "fsync failed: " + path_.string());
  history_.push_back(record);
}

}  // namespace memaudit
