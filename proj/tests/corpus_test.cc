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

#include <map>
#include <set>
#include <vector>

#include "core/digest.h"
#include "corpus/augment.h"
#include "corpus/generator.h"
#include "corpus/scoring.h"
#include "test_util.h"

namespace memaudit::corpus {
namespace {

using testing::RawTensor;
using testing::TempDir;

ImageTensor RandomImage(std::vector<std::size_t> dims, std::uint64_t seed) {
  ImageTensor img(std::move(dims));
  Rng rng(seed);
  for (float& v : img.mutable_values()) v = static_cast<float>(rng.Uniform());
  return img;
}

// --- Augmentation -------------------------------------------------------------

TEST(Augment, IdentitySpecIsNoOp) {
  for (auto dims : {std::vector<std::size_t>{16, 20},
                    std::vector<std::size_t>{6, 16, 17}}) {
    const ImageTensor img = RandomImage(dims, 3);
    EXPECT_EQ(Augment(img, AugmentationSpec::Identity(), 99), img);
  }
}

TEST(Augment, DoubleFlipIsInvolution) {
  const ImageTensor img = RandomImage({5, 7, 9}, 4);
  for (std::size_t axis = 0; axis < 3; ++axis) {
    EXPECT_NE(Flip(img, axis), img);
    EXPECT_EQ(Flip(Flip(img, axis), axis), img);
  }
  AugmentationSpec forced = AugmentationSpec::Identity();
  forced.flip_prob = {0.0, 1.0, 0.0};
  const ImageTensor flat = RandomImage({8, 12}, 5);
  EXPECT_EQ(Augment(Augment(flat, forced, 1), forced, 2), flat);
  EXPECT_EQ(Augment(flat, forced, 1), Flip(flat, 1));
}

TEST(Augment, RotationMatchesScipyResampling) {
  for (const auto& c : testing::Oracles()["rotation"]) {
    const ImageTensor in = RawTensor(c["input"].get<std::string>());
    const ImageTensor expected = RawTensor(c["expected"].get<std::string>());
    const auto axes = c["axes"].get<std::vector<std::size_t>>();
    const ImageTensor out =
        RotatePlane(in, axes[0], axes[1], c["degrees"].get<double>());
    ASSERT_EQ(out.dims(), expected.dims());
    for (std::size_t i = 0; i < out.size(); ++i) {
      ASSERT_NEAR(out.values()[i], expected.values()[i], 1e-5)
          << c["expected"] << " pixel " << i;
    }
  }
}

TEST(Augment, ZeroRotationIsIdentity) {
  const ImageTensor img = RandomImage({9, 11}, 6);
  EXPECT_EQ(RotatePlane(img, 0, 1, 0.0), img);
}

TEST(Augment, OutputClampedAndSeeded) {
  const ImageTensor img = RandomImage({16, 16}, 7);
  const AugmentationSpec spec;
  const ImageTensor a = Augment(img, spec, 11);
  EXPECT_EQ(a, Augment(img, spec, 11));
  EXPECT_NE(a, Augment(img, spec, 12));
  for (float v : a.values()) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(Augment, SpecValidationAndJson) {
  AugmentationSpec bad;
  bad.flip_prob[0] = 1.5;
  EXPECT_THROW(Validate(bad), Error);
  bad = {};
  bad.contrast_min = 2;
  bad.contrast_max = 1;
  EXPECT_THROW(Validate(bad), Error);
  const AugmentationSpec spec;
  EXPECT_EQ(ToJson(AugmentationFromJson(ToJson(spec))), ToJson(spec));
  EXPECT_THROW(AugmentationFromJson(Json::parse(R"({"flip": 1})")), Error);
}

// --- Generator ----------------------------------------------------------------

PlantSpec Small() {
  PlantSpec s;
  s.n_train = 20;
  s.n_val = 15;
  s.n_novel_synth = 12;
  s.n_exact_copies = 4;
  s.n_augmented_copies = 3;
  s.dims = {16, 16};
  s.seed = 3;
  return s;
}

TEST(Generator, BlobImagesAreNormalizedAndSeeded) {
  const ImageTensor a = BlobImage({32, 32}, 1);
  EXPECT_EQ(a, BlobImage({32, 32}, 1));
  EXPECT_NE(a, BlobImage({32, 32}, 2));
  float lo = 1, hi = 0;
  for (float v : a.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_EQ(lo, 0.0f);
  EXPECT_EQ(hi, 1.0f);
  EXPECT_EQ(BlobImage({16, 16, 16}, 1).size(), 4096u);
  EXPECT_THROW(BlobImage({8, 32}, 1), Error);
}

TEST(Generator, CountsAndTruth) {
  const Corpus c = GenerateCorpus(Small(), AugmentationSpec());
  EXPECT_EQ(c.train.size(), 20u);
  EXPECT_EQ(c.val.size(), 15u);
  ASSERT_EQ(c.synth.size(), 19u);
  ASSERT_EQ(c.truth.size(), 19u);
  std::map<Origin, int> counts;
  std::set<std::string> sources;
  std::map<std::string, const ImageTensor*> train;
  for (const auto& s : c.train) train[s.id] = &s.image;
  for (std::size_t i = 0; i < c.synth.size(); ++i) {
    const auto& t = c.truth[i];
    EXPECT_EQ(t.synth_id, c.synth[i].id);
    ++counts[t.origin];
    if (t.origin == Origin::kNovel) {
      EXPECT_TRUE(t.source_train_id.empty());
      continue;
    }
    EXPECT_TRUE(sources.insert(t.source_train_id).second);
    const ImageTensor& src = *train.at(t.source_train_id);
    if (t.origin == Origin::kExactCopy) {
      EXPECT_EQ(c.synth[i].image, src);
    } else {
      EXPECT_NE(c.synth[i].image, src);
    }
  }
  EXPECT_EQ(counts[Origin::kNovel], 12);
  EXPECT_EQ(counts[Origin::kExactCopy], 4);
  EXPECT_EQ(counts[Origin::kAugmentedCopy], 3);
}

TEST(Generator, NoCopiesMeansAllNovel) {
  PlantSpec s = Small();
  s.n_exact_copies = s.n_augmented_copies = 0;
  for (const auto& t : GenerateCorpus(s, AugmentationSpec()).truth) {
    EXPECT_EQ(t.origin, Origin::kNovel);
  }
}

TEST(Generator, AllExactIsPermutationOfTrain) {
  PlantSpec s = Small();
  s.n_novel_synth = 0;
  s.n_augmented_copies = 0;
  s.n_exact_copies = s.n_train;
  const Corpus c = GenerateCorpus(s, AugmentationSpec());
  std::multiset<std::string> train_digests, synth_digests;
  for (const auto& t : c.train) train_digests.insert(Sha256Hex(EncodeTensor(t.image)));
  for (const auto& t : c.synth) synth_digests.insert(Sha256Hex(EncodeTensor(t.image)));
  EXPECT_EQ(train_digests, synth_digests);
}

TEST(Generator, WriteIsDeterministicAndManifestRoundTrips) {
  PlantSpec s = Small();
  TempDir a, b;
  const Json ma = WriteCorpus(GenerateCorpus(s, AugmentationSpec()), s,
                              AugmentationSpec(), a.path());
  const Json mb = WriteCorpus(GenerateCorpus(s, AugmentationSpec()), s,
                              AugmentationSpec(), b.path());
  EXPECT_EQ(DumpJson(ma), DumpJson(mb));
  EXPECT_EQ(FileSha256Hex(a / "corpus.json"), FileSha256Hex(b / "corpus.json"));
  const GroundTruth truth = TruthFromManifest(ReadJsonFile(a / "corpus.json"));
  const Corpus c = GenerateCorpus(s, AugmentationSpec());
  ASSERT_EQ(truth.size(), c.truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    EXPECT_EQ(truth[i].synth_id, c.truth[i].synth_id);
    EXPECT_EQ(truth[i].origin, c.truth[i].origin);
    EXPECT_EQ(truth[i].source_train_id, c.truth[i].source_train_id);
  }
  // Files on disk read back (after normalization) as the in-memory images.
  EXPECT_EQ(ReadTensor(a / "train" / (c.train[0].id + ".mimg")), c.train[0].image);
}

TEST(Generator, DefaultSpecSizes) {
  PlantSpec s;
  EXPECT_EQ(s.n_train, 100u);
  EXPECT_EQ(s.n_novel_synth, 80u);
  EXPECT_EQ(s.n_exact_copies, 10u);
  EXPECT_EQ(s.n_augmented_copies, 10u);
  PlantSpec over = Small();
  over.n_exact_copies = 30;
  EXPECT_THROW(Validate(over), Error);
  EXPECT_THROW(PlantSpecFromJson(Json::parse(R"({"n_trains": 3})")), Error);
  EXPECT_EQ(PlantSpecFromJson(Json::parse(R"({"n_train": 30})")).n_train, 30u);
}

// --- Scoring ------------------------------------------------------------------

GroundTruth Truth() {
  return {{"s0", Origin::kNovel, ""},
          {"s1", Origin::kExactCopy, "t1"},
          {"s2", Origin::kAugmentedCopy, "t2"},
          {"s3", Origin::kNovel, ""},
          {"s4", Origin::kExactCopy, "t4"},
          {"s5", Origin::kAugmentedCopy, "t5"}};
}

detection::AuditReport ReportFlagging(
    const std::vector<detection::PairMatch>& copies) {
  detection::AuditReport r;
  r.n_synth = 6;
  r.copies = copies;
  r.n_copies = copies.size();
  return r;
}

TEST(Scoring, PerfectReport) {
  const auto s = ScoreDetector(
      Truth(), ReportFlagging({{"t1", "s1", 1}, {"t2", "s2", 0.9f},
                               {"t4", "s4", 1}, {"t5", "s5", 0.95f}}));
  EXPECT_EQ(s.recall_exact, 1.0);
  EXPECT_EQ(s.recall_aug, 1.0);
  EXPECT_EQ(s.precision, 1.0);
  EXPECT_EQ(s.exact.source_matched, 2u);
}

TEST(Scoring, EmptyReport) {
  const auto s = ScoreDetector(Truth(), ReportFlagging({}));
  EXPECT_EQ(s.recall_exact, 0.0);
  EXPECT_EQ(s.recall_aug, 0.0);
  EXPECT_FALSE(s.precision.has_value());
}

TEST(Scoring, PartialDetectorHandTabulated) {
  // Flags: one exact (right source), one augmented (wrong source), one novel.
  const auto s = ScoreDetector(
      Truth(), ReportFlagging({{"t1", "s1", 1}, {"t9", "s5", 0.9f},
                               {"t0", "s3", 0.9f}}));
  EXPECT_DOUBLE_EQ(*s.recall_exact, 0.5);
  EXPECT_DOUBLE_EQ(*s.recall_aug, 0.5);
  EXPECT_DOUBLE_EQ(*s.precision, 2.0 / 3.0);
  EXPECT_EQ(s.augmented.source_matched, 0u);
  EXPECT_EQ(s.novel.flagged, 1u);
}

TEST(Scoring, MismatchedReportRejected) {
  auto r = ReportFlagging({{"t1", "s99", 1}});
  EXPECT_THROW(ScoreDetector(Truth(), r), Error);
  r = ReportFlagging({});
  r.n_synth = 5;
  EXPECT_THROW(ScoreDetector(Truth(), r), Error);
}

}  // namespace
}  // namespace memaudit::corpus
