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

#ifndef MEMAUDIT_DETECTION_DETECTION_H_
#define MEMAUDIT_DETECTION_DETECTION_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/json.h"
#include "core/vector_set.h"
#include "similarity/similarity.h"

namespace memaudit::detection {

// Linear interpolation between closest ranks: sort ascending, r = u/100 *
// (n - 1), interpolate between floor(r) and ceil(r). Requires 0 < u < 100.
double Percentile(std::span<const float> values, double u);

struct Threshold {
  double tau = 0.0;
  double percentile_u = 95.0;
  std::size_t n_calibration = 0;
  // Nearest-neighbour correlations the threshold was taken from.
  std::vector<float> calibration_values;
};

Threshold ThresholdFromValues(std::vector<float> values, double u);

// Uses the nearest validation correlation of every training row as the
// calibration distribution.
Threshold CalibrateThreshold(const VectorSet& train, const VectorSet& val,
                             double u = 95.0,
                             const similarity::NearestOptions& options = {});

struct PairMatch {
  std::string train_id;
  std::string synth_id;
  float rho = 0.0f;
  bool operator==(const PairMatch&) const = default;
};

struct AuditReport {
  Threshold tau;
  std::string audit_kind = "memorization";  // or "null"
  std::size_t n_train = 0;
  std::size_t n_val = 0;
  std::size_t n_synth = 0;
  // Train side: one entry per flagged training row, in training order.
  std::vector<PairMatch> memorized;
  // Synth side: one entry per flagged synthetic row, in synthetic order.
  std::vector<PairMatch> copies;
  // Nearest synthetic sample of every training row, flagged or not.
  std::vector<PairMatch> nearest;
  std::size_t n_mem = 0;
  std::size_t n_copies = 0;
  double pct_mem = 0.0;
  double pct_copies = 0.0;
  std::string config_digest;
};

// Train row i is memorized iff its nearest synthetic correlation >= tau.
// Fills the train-side fields.
AuditReport DetectMemorized(const VectorSet& train, const VectorSet& synth,
                            const Threshold& tau,
                            const similarity::NearestOptions& options = {});

// Synthetic row j is a copy iff its nearest training correlation >= tau.
// Fills the synth-side fields.
AuditReport CountCopies(const VectorSet& train, const VectorSet& synth,
                        const Threshold& tau,
                        const similarity::NearestOptions& options = {});

// Both directions plus provenance digest.
AuditReport Audit(const VectorSet& train, const VectorSet& synth,
                  const Threshold& tau,
                  const similarity::NearestOptions& options = {});

// Audit with data never used for generative training standing in for the
// training set. The flagged fraction estimates the false-positive rate.
AuditReport NullAudit(const VectorSet& holdout, const VectorSet& synth,
                      const Threshold& tau,
                      const similarity::NearestOptions& options = {});

struct CurvePoint {
  std::string label;
  std::size_t n_synth = 0;
  std::size_t n_mem = 0;
  double pct_mem = 0.0;
  std::size_t n_copies = 0;
  double pct_copies = 0.0;
};

struct MemorizationCurve {
  Threshold tau;
  std::string tau_policy;
  std::size_t n_train = 0;
  std::vector<CurvePoint> points;
};

struct Checkpoint {
  std::string label;
  VectorSet synth;
};

// Calibrates tau once from (train, val) and audits every checkpoint with it,
// preserving input order.
MemorizationCurve ComputeMemorizationCurve(
    const VectorSet& train, const std::vector<Checkpoint>& checkpoints,
    double u, const VectorSet& val,
    const similarity::NearestOptions& options = {});

// SHA-256 over the canonical JSON of input digests and parameters.
std::string ConfigDigest(const nlohmann::json& input_digests,
                         const nlohmann::json& params);
// Digest of a set's MEMB encoding; equals the digest of the file it was
// read from.
std::string VectorSetDigest(const VectorSet& set);

Json ToJson(const AuditReport& report);
AuditReport ReportFromJson(const Json& j);
Json ToJson(const MemorizationCurve& curve);

}  // namespace memaudit::detection

#endif  // MEMAUDIT_DETECTION_DETECTION_H_
