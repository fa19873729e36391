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

#include "detection/detection.h"

#include <algorithm>
#include <cmath>

#include "core/digest.h"
#include "core/error.h"

namespace memaudit::detection {
namespace {

double Percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0
                    : 100.0 * static_cast<double>(part) /
                          static_cast<double>(whole);
}

bool AtOrAbove(float rho, const Threshold& tau) {
  return static_cast<double>(rho) >= tau.tau;
}

Json PairsToJson(const std::vector<PairMatch>& pairs,
                           bool synth_first) {
  Json arr = Json::array();
  for (const auto& p : pairs) {
    Json o;
    if (synth_first) {
      o["synth_id"] = p.synth_id;
      o["train_id"] = p.train_id;
    } else {
      o["train_id"] = p.train_id;
      o["synth_id"] = p.synth_id;
    }
    o["rho"] = p.rho;
    arr.push_back(o);
  }
  return arr;
}

std::vector<PairMatch> PairsFromJson(const Json& arr) {
  std::vector<PairMatch> out;
  for (const auto& o : arr) {
    out.push_back({o.at("train_id").get<std::string>(),
                   o.at("synth_id").get<std::string>(),
                   o.at("rho").get<float>()});
  }
  return out;
}

}  // namespace

double Percentile(std::span<const float> values, double u) {
  Check(!values.empty(), ErrorCode::kInvalidArgument,
        "percentile of empty input");
  Check(u > 0.0 && u < 100.0, ErrorCode::kInvalidArgument,
        "percentile must lie in (0, 100)");
  std::vector<float> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = u / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return static_cast<double>(sorted[lo]) +
         frac * (static_cast<double>(sorted[hi]) - sorted[lo]);
}

Threshold ThresholdFromValues(std::vector<float> values, double u) {
  Threshold t;
  t.tau = Percentile(values, u);
  t.percentile_u = u;
  t.n_calibration = values.size();
  t.calibration_values = std::move(values);
  return t;
}

Threshold CalibrateThreshold(const VectorSet& train, const VectorSet& val,
                             double u,
                             const similarity::NearestOptions& options) {
  auto nn = similarity::Nearest(train, val, options);
  return ThresholdFromValues(std::move(nn.rho), u);
}

AuditReport DetectMemorized(const VectorSet& train, const VectorSet& synth,
                            const Threshold& tau,
                            const similarity::NearestOptions& options) {
  AuditReport report;
  report.tau = tau;
  report.n_train = train.rows();
  report.n_val = tau.n_calibration;
  report.n_synth = synth.rows();
  const auto nn = similarity::Nearest(train, synth, options);
  report.nearest.reserve(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    PairMatch m{train.ids()[i], nn.match_ids[i], nn.rho[i]};
    if (AtOrAbove(m.rho, tau)) report.memorized.push_back(m);
    report.nearest.push_back(std::move(m));
  }
  report.n_mem = report.memorized.size();
  report.pct_mem = Percent(report.n_mem, report.n_train);
  return report;
}

AuditReport CountCopies(const VectorSet& train, const VectorSet& synth,
                        const Threshold& tau,
                        const similarity::NearestOptions& options) {
  AuditReport report;
  report.tau = tau;
  report.n_train = train.rows();
  report.n_val = tau.n_calibration;
  report.n_synth = synth.rows();
  const auto nn = similarity::Nearest(synth, train, options);
  for (std::size_t j = 0; j < synth.rows(); ++j) {
    if (AtOrAbove(nn.rho[j], tau)) {
      report.copies.push_back({nn.match_ids[j], synth.ids()[j], nn.rho[j]});
    }
  }
  report.n_copies = report.copies.size();
  report.pct_copies = Percent(report.n_copies, report.n_synth);
  return report;
}

AuditReport Audit(const VectorSet& train, const VectorSet& synth,
                  const Threshold& tau,
                  const similarity::NearestOptions& options) {
  AuditReport report = DetectMemorized(train, synth, tau, options);
  AuditReport copies = CountCopies(train, synth, tau, options);
  report.copies = std::move(copies.copies);
  report.n_copies = copies.n_copies;
  report.pct_copies = copies.pct_copies;
  nlohmann::json inputs = {{"train", VectorSetDigest(train)},
                           {"synth", VectorSetDigest(synth)}};
  nlohmann::json params = {{"percentile_u", tau.percentile_u},
                           {"tau", tau.tau},
                           {"n_calibration", tau.n_calibration}};
  report.config_digest = ConfigDigest(inputs, params);
  return report;
}

AuditReport NullAudit(const VectorSet& holdout, const VectorSet& synth,
                      const Threshold& tau,
                      const similarity::NearestOptions& options) {
  AuditReport report = Audit(holdout, synth, tau, options);
  report.audit_kind = "null";
  return report;
}

MemorizationCurve ComputeMemorizationCurve(
    const VectorSet& train, const std::vector<Checkpoint>& checkpoints,
    double u, const VectorSet& val,
    const similarity::NearestOptions& options) {
  Check(!checkpoints.empty(), ErrorCode::kInvalidArgument,
        "memorization curve needs at least one checkpoint");
  for (const auto& c : checkpoints) {
    Check(c.synth.cols() == train.cols(), ErrorCode::kInvalidArgument,
          "dimension mismatch in checkpoint " + c.label);
  }
  MemorizationCurve curve;
  curve.tau = CalibrateThreshold(train, val, u, options);
  curve.tau_policy = "calibrated once on (train, val); reused for all checkpoints";
  curve.n_train = train.rows();
  for (const auto& c : checkpoints) {
    const AuditReport r = Audit(train, c.synth, curve.tau, options);
    curve.points.push_back({c.label, r.n_synth, r.n_mem, r.pct_mem,
                            r.n_copies, r.pct_copies});
  }
  return curve;
}

std::string ConfigDigest(const nlohmann::json& input_digests,
                         const nlohmann::json& params) {
  // nlohmann::json (not ordered_json) sorts keys, so dump() is canonical.
  const nlohmann::json doc = {{"inputs", input_digests}, {"params", params}};
  return Sha256Hex(doc.dump());
}

std::string VectorSetDigest(const VectorSet& set) {
  return Sha256Hex(EncodeVectorSet(set));
}

Json ToJson(const AuditReport& r) {
  Json j;
  j["audit_kind"] = r.audit_kind;
  j["tau"] = r.tau.tau;
  j["percentile_u"] = r.tau.percentile_u;
  j["n_train"] = r.n_train;
  j["n_val"] = r.n_val;
  j["n_synth"] = r.n_synth;
  j["n_mem"] = r.n_mem;
  j["n_copies"] = r.n_copies;
  j["pct_mem"] = r.pct_mem;
  j["pct_copies"] = r.pct_copies;
  j["memorized"] = PairsToJson(r.memorized, false);
  j["copies"] = PairsToJson(r.copies, true);
  j["nearest"] = PairsToJson(r.nearest, false);
  j["rho_nn_val"] = r.tau.calibration_values;
  j["config_digest"] = r.config_digest;
  return j;
}

AuditReport ReportFromJson(const Json& j) {
  try {
    AuditReport r;
    r.audit_kind = j.value("audit_kind", std::string("memorization"));
    r.tau.tau = j.at("tau").get<double>();
    r.tau.percentile_u = j.at("percentile_u").get<double>();
    r.n_train = j.at("n_train").get<std::size_t>();
    r.n_val = j.at("n_val").get<std::size_t>();
    r.n_synth = j.at("n_synth").get<std::size_t>();
    r.n_mem = j.at("n_mem").get<std::size_t>();
    r.n_copies = j.at("n_copies").get<std::size_t>();
    r.pct_mem = j.at("pct_mem").get<double>();
    r.pct_copies = j.at("pct_copies").get<double>();
    r.memorized = PairsFromJson(j.at("memorized"));
    r.copies = PairsFromJson(j.at("copies"));
    if (j.contains("nearest")) r.nearest = PairsFromJson(j.at("nearest"));
    if (j.contains("rho_nn_val")) {
      r.tau.calibration_values = j.at("rho_nn_val").get<std::vector<float>>();
    }
    r.tau.n_calibration = r.n_val;
    r.config_digest = j.at("config_digest").get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    Throw(ErrorCode::kFormat, std::string("malformed audit report: ") + e.what());
  }
}

Json ToJson(const MemorizationCurve& c) {
  Json j;
  j["tau"] = c.tau.tau;
  j["percentile_u"] = c.tau.percentile_u;
  j["n_calibration"] = c.tau.n_calibration;
  j["tau_policy"] = c.tau_policy;
  j["n_train"] = c.n_train;
  Json pts = Json::array();
  for (const auto& p : c.points) {
    Json o;
    o["label"] = p.label;
    o["n_synth"] = p.n_synth;
    o["n_mem"] = p.n_mem;
    o["pct_mem"] = p.pct_mem;
    o["n_copies"] = p.n_copies;
    o["pct_copies"] = p.pct_copies;
    pts.push_back(o);
  }
  j["checkpoints"] = pts;
  return j;
}

}  // namespace memaudit::detection
