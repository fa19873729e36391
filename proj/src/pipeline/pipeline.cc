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

#include "pipeline/pipeline.h"

#include <algorithm>

#include "contrastive/pooling.h"
#include "core/error.h"

namespace memaudit::pipeline {

std::vector<std::size_t> DefaultPoolGrid(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> grid;
  for (std::size_t d : dims) grid.push_back(std::min<std::size_t>(8, d));
  // Keep 3D feature vectors at a desk-friendly length.
  if (dims.size() == 3) {
    for (auto& g : grid) g = std::min<std::size_t>(4, g);
  }
  return grid;
}

std::vector<corpus::Sample> LoadImageDir(const std::filesystem::path& dir) {
  Check(std::filesystem::is_directory(dir), ErrorCode::kIo,
        "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mimg") {
      files.push_back(entry.path());
    }
  }
  Check(!files.empty(), ErrorCode::kInvalidArgument,
        "no .mimg files in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<corpus::Sample> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    out.push_back({f.stem().string(), ReadTensor(f)});
  }
  return out;
}

VectorSet PoolAll(const std::vector<corpus::Sample>& samples,
                  const std::vector<std::size_t>& grid, Role role) {
  Check(!samples.empty(), ErrorCode::kInvalidArgument, "no images to pool");
  std::vector<std::string> ids;
  std::vector<float> matrix;
  std::size_t cols = 0;
  for (const auto& s : samples) {
    const auto f = contrastive::PoolFeatures(s.image, grid);
    cols = f.size();
    ids.push_back(s.id);
    matrix.insert(matrix.end(), f.begin(), f.end());
  }
  return VectorSet(role, std::move(ids), cols, std::move(matrix));
}

contrastive::AugmentHook ImageAugmentHook(
    const std::vector<corpus::Sample>& samples,
    const std::vector<std::size_t>& grid, const corpus::AugmentationSpec& aug) {
  corpus::Validate(aug);
  return [&samples, grid, aug](std::size_t index, Rng& rng) {
    ImageTensor view = corpus::Augment(samples.at(index).image, aug,
                                       rng.NextU64());
    NormalizeMinMax(view);
    return contrastive::PoolFeatures(view, grid);
  };
}

contrastive::TrainResult TrainOnImages(
    const std::vector<corpus::Sample>& samples,
    const std::vector<std::size_t>& grid, const contrastive::TrainConfig& cfg,
    const corpus::AugmentationSpec& aug) {
  const VectorSet features = PoolAll(samples, grid, Role::kTrain);
  auto result = contrastive::TrainEncoder(features, cfg,
                                          ImageAugmentHook(samples, grid, aug));
  result.model.set_pool_grid(grid);
  return result;
}

VectorSet EmbedImages(const contrastive::EncoderModel& model,
                      const std::vector<corpus::Sample>& samples, Role role) {
  Check(!model.pool_grid().empty(), ErrorCode::kInvalidArgument,
        "model has no pooling grid");
  return contrastive::Embed(model, PoolAll(samples, model.pool_grid(), role));
}

}  // namespace memaudit::pipeline
