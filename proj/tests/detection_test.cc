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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "core/log.h"
#include "detection/detection.h"
#include "similarity/similarity.h"
#include "test_util.h"

namespace memaudit::detection {
namespace {

using testing::FromRows;
using testing::OrthonormalCentered;
using testing::RandomSet;
using testing::ToFloat;

std::vector<float> Ladder() {
  std::vector<float> v;
  for (int i = 1; i <= 20; ++i) v.push_back(0.05f * static_cast<float>(i));
  return v;
}

TEST(Percentile, Examples) {
  EXPECT_NEAR(Percentile(std::vector<float>(7, 0.7f), 95), 0.7, 1e-7);
  EXPECT_NEAR(Percentile(Ladder(), 95), 0.9525, 1e-6);
  for (double u : {1.0, 50.0, 99.0}) {
    EXPECT_NEAR(Percentile(std::vector<float>{0.3f}, u), 0.3, 1e-7);
  }
}

TEST(Percentile, OrderIndependentAndMonotone) {
  auto v = Ladder();
  std::reverse(v.begin(), v.end());
  EXPECT_NEAR(Percentile(v, 95), 0.9525, 1e-6);
  Rng rng(3);
  std::vector<float> r(37);
  for (float& x : r) x = static_cast<float>(rng.Uniform(-1, 1));
  double prev = -2;
  for (double u = 1; u < 100; u += 0.5) {
    const double p = Percentile(r, u);
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(Percentile, InvalidInput) {
  EXPECT_THROW(Percentile(std::vector<float>{}, 95), Error);
  EXPECT_THROW(Percentile(Ladder(), 0), Error);
  EXPECT_THROW(Percentile(Ladder(), 100), Error);
}

TEST(Calibrate, ValEqualsTrainGivesOne) {
  const VectorSet t = RandomSet(Role::kTrain, 15, 8, 1, "t");
  const Threshold th = CalibrateThreshold(t, t.WithRole(Role::kVal), 95);
  EXPECT_NEAR(th.tau, 1.0, 1e-6);
  EXPECT_EQ(th.calibration_values.size(), 15u);
}

// Train rows u_i and validation rows r_i u_i + sqrt(1 - r_i^2) w_i built from
// one orthonormal family, so the nearest validation correlation of u_i is r_i.
TEST(Calibrate, EngineeredLadderGivesInterpolatedPercentile) {
  const auto basis = OrthonormalCentered(40, 64, 5);
  const auto r = Ladder();
  std::vector<std::vector<float>> train, val;
  for (std::size_t i = 0; i < 20; ++i) {
    train.push_back(ToFloat(basis[i]));
    std::vector<double> v(64);
    const double c = std::sqrt(1.0 - double(r[i]) * r[i]);
    for (std::size_t k = 0; k < 64; ++k) {
      v[k] = r[i] * basis[i][k] + c * basis[20 + i][k];
    }
    val.push_back(ToFloat(v));
  }
  const Threshold th = CalibrateThreshold(FromRows(Role::kTrain, train, "t"),
                                          FromRows(Role::kVal, val, "v"), 95);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_NEAR(th.calibration_values[i], r[i], 1e-5);
  }
  EXPECT_NEAR(th.tau, 0.9525, 1e-5);
  EXPECT_EQ(th.percentile_u, 95.0);
}

TEST(Calibrate, TauNonDecreasingInU) {
  const VectorSet t = RandomSet(Role::kTrain, 40, 10, 2, "t");
  const VectorSet v = RandomSet(Role::kVal, 60, 10, 3, "v");
  double prev = -2;
  for (double u : {80.0, 90.0, 95.0, 99.0}) {
    const double tau = CalibrateThreshold(t, v, u).tau;
    EXPECT_GE(tau, prev);
    prev = tau;
  }
}

Threshold Fixed(double tau) {
  Threshold t;
  t.tau = tau;
  t.percentile_u = 95;
  return t;
}

TEST(Detect, SynthEqualsTrainFlagsEverything) {
  const VectorSet t = RandomSet(Role::kTrain, 25, 8, 4, "t");
  const AuditReport r = Audit(t, t.WithRole(Role::kSynth), Fixed(0.99));
  EXPECT_EQ(r.n_mem, 25u);
  EXPECT_EQ(r.n_copies, 25u);
  EXPECT_DOUBLE_EQ(r.pct_mem, 100.0);
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_EQ(r.memorized[i].train_id, t.ids()[i]);
    EXPECT_EQ(r.memorized[i].synth_id, t.ids()[i]);
  }
}

TEST(Detect, UnattainableTauFlagsNothing) {
  const VectorSet t = RandomSet(Role::kTrain, 10, 8, 4, "t");
  const AuditReport r = Audit(t, t.WithRole(Role::kSynth), Fixed(1.0 + 1e-6));
  EXPECT_EQ(r.n_mem, 0u);
  EXPECT_EQ(r.n_copies, 0u);
  EXPECT_EQ(r.nearest.size(), 10u);
}

// 30 exact duplicates of distinct training rows plus 30 novel rows
// orthogonal to every training row.
TEST(Detect, PlantedDuplicatesExactlyRecovered) {
  const std::size_t n_train = 40, dim = 128;
  const auto basis = OrthonormalCentered(n_train + 30, dim, 11);
  std::vector<std::vector<float>> train, synth;
  for (std::size_t i = 0; i < n_train; ++i) train.push_back(ToFloat(basis[i]));
  Rng rng(6);
  auto perm = rng.Permutation(n_train);
  std::set<std::string> planted;
  std::vector<std::string> synth_ids;
  for (std::size_t k = 0; k < 30; ++k) {
    synth.push_back(train[perm[k]]);
    planted.insert("t" + std::to_string(perm[k]));
    synth.push_back(ToFloat(basis[n_train + k]));
  }
  const VectorSet tr = FromRows(Role::kTrain, train, "t");
  const VectorSet sy = FromRows(Role::kSynth, synth, "s");
  const VectorSet val = RandomSet(Role::kVal, 80, dim, 7, "v");
  const Threshold tau = CalibrateThreshold(tr, val, 95);
  const AuditReport r = DetectMemorized(tr, sy, tau);
  std::set<std::string> flagged;
  for (const auto& m : r.memorized) {
    flagged.insert(m.train_id);
    EXPECT_GE(m.rho, tau.tau);
  }
  EXPECT_EQ(flagged, planted);
  EXPECT_EQ(r.n_mem, 30u);
  EXPECT_DOUBLE_EQ(r.pct_mem, 100.0 * 30 / 40);
}

TEST(Detect, ThreeCopiesOfOneSample) {
  const VectorSet t = RandomSet(Role::kTrain, 6, 64, 1, "t");
  const VectorSet noise = RandomSet(Role::kSynth, 5, 64, 2, "n");
  std::vector<std::vector<float>> rows;
  for (int k = 0; k < 3; ++k) rows.emplace_back(t.row(2).begin(), t.row(2).end());
  for (std::size_t i = 0; i < 5; ++i) rows.emplace_back(noise.row(i).begin(), noise.row(i).end());
  const AuditReport r = Audit(t, FromRows(Role::kSynth, rows, "s"), Fixed(0.95));
  EXPECT_EQ(r.n_mem, 1u);
  EXPECT_EQ(r.n_copies, 3u);
  EXPECT_EQ(r.memorized[0].train_id, "t2");
  EXPECT_NEAR(r.pct_copies, 100.0 * 3 / 8, 1e-12);
}

TEST(Detect, DecorrelatedSynthHasNoCopies) {
  const auto basis = OrthonormalCentered(20, 32, 3);
  std::vector<std::vector<float>> t, s;
  for (int i = 0; i < 10; ++i) t.push_back(ToFloat(basis[i]));
  for (int i = 10; i < 20; ++i) s.push_back(ToFloat(basis[i]));
  const AuditReport r = Audit(FromRows(Role::kTrain, t, "t"),
                              FromRows(Role::kSynth, s, "s"), Fixed(0.95));
  EXPECT_EQ(r.n_copies, 0u);
  EXPECT_EQ(r.n_mem, 0u);
}

TEST(Detect, EveryMatchedSynthRowIsACopy) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const VectorSet t = RandomSet(Role::kTrain, 20, 6, seed * 3, "t");
    std::vector<std::vector<float>> rows;
    const std::size_t n = 5 + rng.Below(20);
    const VectorSet noise = RandomSet(Role::kSynth, n, 6, seed * 3 + 1, "n");
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.Bernoulli(0.4)) {
        const auto src = t.row(rng.Below(20));
        rows.emplace_back(src.begin(), src.end());
      } else {
        rows.emplace_back(noise.row(i).begin(), noise.row(i).end());
      }
    }
    const AuditReport r =
        Audit(t, FromRows(Role::kSynth, rows, "s"), Fixed(rng.Uniform(0.5, 1)));
    std::set<std::string> copy_ids, matched;
    for (const auto& c : r.copies) {
      EXPECT_GE(c.rho, r.tau.tau);
      copy_ids.insert(c.synth_id);
    }
    for (const auto& m : r.memorized) matched.insert(m.synth_id);
    for (const auto& id : matched) EXPECT_TRUE(copy_ids.count(id)) << id;
    EXPECT_GE(r.n_copies, matched.size());
  }
}

// One synthetic row close to two training rows: two memorized, one copy.
TEST(Detect, CopiesCanUndercountMemorizedWhenOneSampleMatchesMany) {
  const VectorSet t = FromRows(Role::kTrain, {{1, 2, 3, 4}, {1, 2, 3, 4.2f}},
                               "t");
  const VectorSet s = FromRows(Role::kSynth, {{1, 2, 3, 4.1f}, {4, 1, 3, 2}},
                               "s");
  const AuditReport r = Audit(t, s, Fixed(0.99));
  EXPECT_EQ(r.n_mem, 2u);
  EXPECT_EQ(r.n_copies, 1u);
}

TEST(NullAudit, HoldoutEqualsSynthFlagsAll) {
  const VectorSet h = RandomSet(Role::kVal, 12, 8, 9, "h");
  const AuditReport r = NullAudit(h, h.WithRole(Role::kSynth), Fixed(0.99));
  EXPECT_EQ(r.audit_kind, "null");
  EXPECT_DOUBLE_EQ(r.pct_mem, 100.0);
}

TEST(NullAudit, ExchangeableNullNearNominalRate) {
  std::size_t flagged = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const VectorSet train = RandomSet(Role::kTrain, 200, 16, seed * 4, "t");
    const VectorSet val = RandomSet(Role::kVal, 200, 16, seed * 4 + 1, "v");
    const VectorSet hold = RandomSet(Role::kVal, 200, 16, seed * 4 + 2, "h");
    const VectorSet syn = RandomSet(Role::kSynth, 200, 16, seed * 4 + 3, "s");
    const Threshold tau = CalibrateThreshold(train, val, 95);
    const AuditReport r = NullAudit(hold, syn, tau);
    flagged += r.n_mem;
    total += r.n_train;
  }
  const double p = double(flagged) / total;
  const double sigma = std::sqrt(0.05 * 0.95 / total);
  EXPECT_NEAR(p, 0.05, 3 * sigma);
}

TEST(Curve, ConstantForRepeatedSet) {
  const VectorSet t = RandomSet(Role::kTrain, 30, 8, 1, "t");
  const VectorSet v = RandomSet(Role::kVal, 30, 8, 2, "v");
  const VectorSet s = RandomSet(Role::kSynth, 30, 8, 3, "s");
  const auto c = ComputeMemorizationCurve(t, {{"a", s}, {"b", s}, {"c", s}},
                                          95, v);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].n_mem, c.points[2].n_mem);
  EXPECT_EQ(c.points[1].label, "b");
}

TEST(Curve, IncreasesWithPlantedFraction) {
  const VectorSet t = RandomSet(Role::kTrain, 40, 64, 1, "t");
  const VectorSet v = RandomSet(Role::kVal, 80, 64, 2, "v");
  const VectorSet noise = RandomSet(Role::kSynth, 40, 64, 3, "s");
  auto mixed = [&](std::size_t planted) {
    std::vector<std::vector<float>> rows;
    for (std::size_t i = 0; i < 40; ++i) {
      const auto src = i < planted ? t.row(i) : noise.row(i);
      rows.emplace_back(src.begin(), src.end());
    }
    return FromRows(Role::kSynth, rows, "s");
  };
  const auto c = ComputeMemorizationCurve(
      t, {{"random", mixed(0)}, {"half", mixed(20)}, {"full", mixed(40)}}, 95,
      v);
  EXPECT_LT(c.points[0].n_mem, c.points[1].n_mem);
  EXPECT_LT(c.points[1].n_mem, c.points[2].n_mem);
  EXPECT_EQ(c.points[2].n_mem, 40u);
}

TEST(Curve, SingleCheckpointMatchesDetect) {
  const VectorSet t = RandomSet(Role::kTrain, 30, 8, 5, "t");
  const VectorSet v = RandomSet(Role::kVal, 30, 8, 6, "v");
  const VectorSet s = RandomSet(Role::kSynth, 45, 8, 7, "s");
  const auto c = ComputeMemorizationCurve(t, {{"only", s}}, 90, v);
  const auto r = DetectMemorized(t, s, CalibrateThreshold(t, v, 90));
  EXPECT_EQ(c.points[0].n_mem, r.n_mem);
  EXPECT_DOUBLE_EQ(c.points[0].pct_mem, r.pct_mem);
}

TEST(Report, JsonRoundTripAndDigest) {
  const VectorSet t = RandomSet(Role::kTrain, 10, 5, 1, "t");
  const VectorSet v = RandomSet(Role::kVal, 10, 5, 2, "v");
  const VectorSet s = RandomSet(Role::kSynth, 10, 5, 3, "s");
  const AuditReport r = Audit(t, s, CalibrateThreshold(t, v, 95));
  const AuditReport back = ReportFromJson(ToJson(r));
  EXPECT_EQ(DumpJson(ToJson(back)), DumpJson(ToJson(r)));
  EXPECT_EQ(r.config_digest.size(), 64u);
  // Digest depends on the inputs.
  const AuditReport other = Audit(t, v.WithRole(Role::kSynth),
                                  CalibrateThreshold(t, v, 95));
  EXPECT_NE(other.config_digest, r.config_digest);
  EXPECT_THROW(ReportFromJson(Json::parse("{\"tau\": 1}")), Error);
}

TEST(Report, ConfigDigestIgnoresKeyOrder) {
  const nlohmann::json a = {{"x", 1}, {"y", "two"}};
  const nlohmann::json b = nlohmann::json::parse(R"({"y":"two","x":1})");
  EXPECT_EQ(ConfigDigest(a, {{"u", 95}}), ConfigDigest(b, {{"u", 95}}));
  EXPECT_NE(ConfigDigest(a, {{"u", 95}}), ConfigDigest(a, {{"u", 99}}));
}

}  // namespace
}  // namespace memaudit::detection
