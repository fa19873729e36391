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

#include "contrastive/pooling.h"

#include "core/error.h"

namespace memaudit::contrastive {
namespace {

std::vector<std::size_t> Bounds(std::size_t extent, std::size_t cells) {
  std::vector<std::size_t> b(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) b[k] = k * extent / cells;
  return b;
}

}  // namespace

std::vector<float> PoolFeatures(const ImageTensor& img,
                                const std::vector<std::size_t>& grid) {
  Check(grid.size() == img.ndim(), ErrorCode::kInvalidArgument,
        "pool grid rank must match image rank");
  for (std::size_t a = 0; a < grid.size(); ++a) {
    Check(grid[a] >= 1 && grid[a] <= img.dims()[a],
          ErrorCode::kInvalidArgument, "pool grid larger than image");
  }
  // Treat 2D as a single-slice 3D volume.
  const bool is3d = img.ndim() == 3;
  const std::size_t depth = is3d ? img.dims()[0] : 1;
  const std::size_t rows = img.dims()[is3d ? 1 : 0];
  const std::size_t cols = img.dims()[is3d ? 2 : 1];
  const std::size_t gd = is3d ? grid[0] : 1;
  const std::size_t gr = grid[is3d ? 1 : 0];
  const std::size_t gc = grid[is3d ? 2 : 1];
  const auto bd = Bounds(depth, gd), br = Bounds(rows, gr), bc = Bounds(cols, gc);
  const auto v = img.values();

  std::vector<float> out;
  out.reserve(gd * gr * gc);
  for (std::size_t d = 0; d < gd; ++d) {
    for (std::size_t r = 0; r < gr; ++r) {
      for (std::size_t c = 0; c < gc; ++c) {
        double sum = 0.0;
        for (std::size_t z = bd[d]; z < bd[d + 1]; ++z) {
          for (std::size_t y = br[r]; y < br[r + 1]; ++y) {
            for (std::size_t x = bc[c]; x < bc[c + 1]; ++x) {
              sum += v[(z * rows + y) * cols + x];
            }
          }
        }
        const double count = static_cast<double>(
            (bd[d + 1] - bd[d]) * (br[r + 1] - br[r]) * (bc[c + 1] - bc[c]));
        out.push_back(static_cast<float>(sum / count));
      }
    }
  }
  return out;
}

}  // namespace memaudit::contrastive
