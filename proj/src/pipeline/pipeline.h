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

#ifndef MEMAUDIT_PIPELINE_PIPELINE_H_
#define MEMAUDIT_PIPELINE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "contrastive/encoder.h"
#include "contrastive/trainer.h"
#include "core/vector_set.h"
#include "corpus/augment.h"
#include "corpus/generator.h"

namespace memaudit::pipeline {

// Every *.mimg file directly inside `dir`, sorted by file name, with the
// file stem as id. kIo if the directory is missing, kInvalidArgument if it
// holds no images.
std::vector<corpus::Sample> LoadImageDir(const std::filesystem::path& dir);

// Default pooling grid: 8 cells per axis, capped by the image extent.
std::vector<std::size_t> DefaultPoolGrid(const std::vector<std::size_t>& dims);

VectorSet PoolAll(const std::vector<corpus::Sample>& samples,
                  const std::vector<std::size_t>& grid, Role role);

// Augments image `index` with a seed drawn from the hook's rng, re-applies
// load-time normalization, and pools.
contrastive::AugmentHook ImageAugmentHook(
    const std::vector<corpus::Sample>& samples,
    const std::vector<std::size_t>& grid, const corpus::AugmentationSpec& aug);

// Pools, trains with image-space augmentation views, and records the grid in
// the model.
contrastive::TrainResult TrainOnImages(
    const std::vector<corpus::Sample>& samples,
    const std::vector<std::size_t>& grid, const contrastive::TrainConfig& cfg,
    const corpus::AugmentationSpec& aug);

// Pools with the model's grid and embeds.
VectorSet EmbedImages(const contrastive::EncoderModel& model,
                      const std::vector<corpus::Sample>& samples, Role role);

}  // namespace memaudit::pipeline

#endif  // MEMAUDIT_PIPELINE_PIPELINE_H_
