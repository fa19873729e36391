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

#ifndef MEMAUDIT_CORPUS_GENERATOR_H_
#define MEMAUDIT_CORPUS_GENERATOR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/json.h"
#include "core/tensor.h"
#include "corpus/augment.h"

namespace memaudit::corpus {

struct PlantSpec {
  std::size_t n_train = 100;
  std::size_t n_val = 1000;
  std::size_t n_novel_synth = 80;
  std::size_t n_exact_copies = 10;
  std::size_t n_augmented_copies = 10;
  std::vector<std::size_t> dims = {32, 32};
  std::uint64_t seed = 0;
};

void Validate(const PlantSpec& spec);
Json ToJson(const PlantSpec& spec);
// Missing keys keep their defaults; unknown keys are rejected.
PlantSpec PlantSpecFromJson(const Json& j);

enum class Origin { kNovel, kExactCopy, kAugmentedCopy };
std::string_view OriginName(Origin origin);

struct SynthTruth {
  std::string synth_id;
  Origin origin = Origin::kNovel;
  std::string source_train_id;  // empty for novel samples
};

using GroundTruth = std::vector<SynthTruth>;

struct Sample {
  std::string id;
  ImageTensor image;
};

struct Corpus {
  std::vector<Sample> train;
  std::vector<Sample> val;
  std::vector<Sample> synth;
  GroundTruth truth;  // aligned with synth
};

// Procedural base image: a min-max normalized superposition of 10-20 small
// Gaussian ellipsoids with random centres, axes, orientation and
// amplitude. Needs every extent >= 16.
ImageTensor BlobImage(const std::vector<std::size_t>& dims,
                      std::uint64_t seed);

// Train, val and novel synthetic images are independent generator draws
// (per-image seeds derived from spec.seed, role and index). Copy sources are
// distinct training samples; augmented copies pass through Augment() and
// load-time normalization. Synthetic order is a seeded shuffle.
Corpus GenerateCorpus(const PlantSpec& spec, const AugmentationSpec& aug);

// Layout: <dir>/{train,val,synth}/<id>.mimg plus <dir>/corpus.json listing
// ids, files, SHA-256 digests and provenance.
Json WriteCorpus(const Corpus& corpus, const PlantSpec& spec,
                 const AugmentationSpec& aug, const std::filesystem::path& dir);

GroundTruth TruthFromManifest(const Json& manifest);

}  // namespace memaudit::corpus

#endif  // MEMAUDIT_CORPUS_GENERATOR_H_
