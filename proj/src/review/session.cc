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

#include "review/session.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "core/error.h"
#include "core/rng.h"
#include "core/tensor.h"
#include "review/png.h"

namespace memaudit::review {

std::vector<ReviewPair> PairQueue(const detection::AuditReport& report) {
  std::vector<ReviewPair> out;
  out.reserve(report.nearest.size());
  for (const auto& m : report.nearest) {
    out.push_back({m.train_id, m.synth_id, m.rho,
                   static_cast<double>(m.rho) >= report.tau.tau});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ReviewPair& a, const ReviewPair& b) {
                     return a.rho > b.rho;
                   });
  return out;
}

std::vector<std::size_t> SampleIndices(std::size_t total, std::size_t n,
                                       std::uint64_t seed) {
  Check(n <= total, ErrorCode::kInvalidArgument,
        "cannot sample " + std::to_string(n) + " of " + std::to_string(total) +
            " pairs");
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(total - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<ReviewPair> SamplePairs(const std::vector<ReviewPair>& pairs,
                                    std::size_t n, std::uint64_t seed) {
  std::vector<ReviewPair> out;
  for (std::size_t i : SampleIndices(pairs.size(), n, seed)) {
    out.push_back(pairs[i]);
  }
  return out;
}

PairStatus ParsePairStatus(const std::string& s) {
  if (s == "pending") return PairStatus::kPending;
  if (s == "labeled") return PairStatus::kLabeled;
  if (s == "all" || s.empty()) return PairStatus::kAll;
  Throw(ErrorCode::kInvalidArgument,
        "status must be pending, labeled or all, got '" + s + "'");
}

ImageResolver::ImageResolver(std::vector<std::filesystem::path> dirs)
    : dirs_(std::move(dirs)) {}

std::filesystem::path ImageResolver::Resolve(const std::string& id) const {
  Check(!id.empty() && id.find('/') == std::string::npos &&
            id.find('\\') == std::string::npos && id != "." && id != "..",
        ErrorCode::kInvalidArgument, "bad image id '" + id + "'");
  for (const auto& dir : dirs_) {
    auto p = dir / (id + ".mimg");
    if (std::filesystem::is_regular_file(p)) return p;
  }
  Throw(ErrorCode::kNotFound, "no image for id '" + id + "'");
}

ReviewSession::ReviewSession(detection::AuditReport report,
                             SessionOptions options)
    : report_(std::move(report)),
      options_(std::move(options)),
      images_(options_.image_dirs),
      store_(options_.labels_path) {
  pairs_ = PairQueue(report_);
  if (options_.sample_n) {
    pairs_ = SamplePairs(pairs_, *options_.sample_n, options_.sample_seed);
  }
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    index_[{pairs_[i].train_id, pairs_[i].synth_id}] = i;
  }
  if (!options_.image_dirs.empty()) {
    for (const auto& p : pairs_) {
      images_.Resolve(p.train_id);
      images_.Resolve(p.synth_id);
    }
  }
}

std::unique_ptr<ReviewSession> ReviewSession::Open(SessionOptions options) {
  auto report = detection::ReportFromJson(ReadJsonFile(options.report_path));
  return std::make_unique<ReviewSession>(std::move(report), std::move(options));
}

std::optional<std::size_t> ReviewSession::Find(
    const std::string& train_id, const std::string& synth_id) const {
  auto it = index_.find({train_id, synth_id});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::set<std::size_t> LabeledIndices(
    const std::vector<LabelRecord>& history,
    const std::map<metrics::PairKey, std::size_t>& index) {
  std::set<std::size_t> out;
  for (const auto& r : history) {
    auto it = index.find({r.train_id, r.synth_id});
    if (it != index.end()) out.insert(it->second);
  }
  return out;
}

}  // namespace

bool ReviewSession::IsLabeled(std::size_t index) const {
  return LabeledIndices(store_.History(), index_).contains(index);
}

std::vector<std::size_t> ReviewSession::Select(PairStatus status) const {
  const auto labeled = LabeledIndices(store_.History(), index_);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const bool is_labeled = labeled.contains(i);
    if (status == PairStatus::kAll ||
        (status == PairStatus::kLabeled) == is_labeled) {
      out.push_back(i);
    }
  }
  return out;
}

LabelRecord ReviewSession::AddLabel(LabelRecord record) {
  Validate(record);
  Check(Find(record.train_id, record.synth_id).has_value(),
        ErrorCode::kNotFound,
        "pair (" + record.train_id + ", " + record.synth_id +
            ") is not in this session");
  if (record.timestamp == 0) {
    record.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
  }
  store_.Append(record);
  return record;
}

std::vector<LabelRecord> ReviewSession::LabelsFor(std::size_t index) const {
  const auto& p = pairs_.at(index);
  std::vector<LabelRecord> out;
  for (auto& r : LatestLabels(store_.History())) {
    if (r.train_id == p.train_id && r.synth_id == p.synth_id) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

metrics::ConfusionSummary ReviewSession::Metrics() const {
  std::map<metrics::PairKey, bool> predicted;
  for (const auto& p : pairs_) {
    predicted[{p.train_id, p.synth_id}] = p.predicted_copy;
  }
  std::vector<LabelRecord> in_session;
  for (auto& r : store_.History()) {
    if (predicted.contains({r.train_id, r.synth_id})) {
      in_session.push_back(std::move(r));
    }
  }
  return metrics::Confusion(in_session, predicted);
}

std::filesystem::path ReviewSession::ImagePath(const std::string& id) const {
  return images_.Resolve(id);
}

namespace {

Json PairSummary(std::size_t index, const ReviewPair& p, bool labeled) {
  Json j;
  j["index"] = index;
  j["train_id"] = p.train_id;
  j["synth_id"] = p.synth_id;
  j["rho"] = p.rho;
  j["predicted_copy"] = p.predicted_copy;
  j["labeled"] = labeled;
  return j;
}

}  // namespace

Json ReviewSession::SessionJson() const {
  const auto labeled = LabeledIndices(store_.History(), index_);
  Json j;
  j["report"] = options_.report_path.string();
  j["config_digest"] = report_.config_digest;
  j["audit_kind"] = report_.audit_kind;
  j["tau"] = report_.tau.tau;
  j["percentile_u"] = report_.tau.percentile_u;
  j["labels_path"] = options_.labels_path.string();
  j["n_pairs"] = pairs_.size();
  j["n_labeled"] = labeled.size();
  j["n_pending"] = pairs_.size() - labeled.size();
  j["sampled"] = options_.sample_n.has_value();
  return j;
}

Json ReviewSession::PairsJson(PairStatus status) const {
  const auto labeled = LabeledIndices(store_.History(), index_);
  Json out = Json::array();
  for (std::size_t i : Select(status)) {
    out.push_back(PairSummary(i, pairs_[i], labeled.contains(i)));
  }
  return out;
}

Json ReviewSession::PairJson(std::size_t index) const {
  Check(index < pairs_.size(), ErrorCode::kNotFound,
        "pair index " + std::to_string(index) + " out of range");
  const auto& p = pairs_[index];
  const auto labels = LabelsFor(index);
  Json j = PairSummary(index, p, !labels.empty());
  for (const auto& [key, id] :
       {std::pair{"train_image", p.train_id}, std::pair{"synth_image", p.synth_id}}) {
    Json img;
    img["id"] = id;
    img["url"] = "/api/image/" + id;
    if (!options_.image_dirs.empty()) {
      const ImageTensor t = ReadTensor(images_.Resolve(id));
      img["dims"] = t.dims();
      img["slices"] = SliceCount(t);
    }
    j[key] = img;
  }
  Json arr = Json::array();
  for (const auto& r : labels) arr.push_back(ToJson(r));
  j["labels"] = arr;
  return j;
}

Json ReviewSession::MetricsJson() const { return metrics::ToJson(Metrics()); }

}  // namespace memaudit::review
