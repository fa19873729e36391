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

#ifndef MEMAUDIT_SIMILARITY_SIMILARITY_H_
#define MEMAUDIT_SIMILARITY_SIMILARITY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/vector_set.h"

namespace memaudit::similarity {

// Pearson correlation over the components of two equal-length vectors,
// accumulated in double and clamped to [-1, 1]. A zero-variance input yields
// 0 and a warning.
double Pearson(std::span<const float> a, std::span<const float> b);

struct CorrelationMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;  // row-major

  float at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct BlockOptions {
  std::size_t block = 64;   // rows per tile side
  std::size_t threads = 0;  // 0 = DefaultThreads()
};

// Entry (i, j) is Pearson(a.row(i), b.row(j)). Bit-identical for every block
// size and thread count.
CorrelationMatrix PairwiseCorrelation(const VectorSet& a, const VectorSet& b,
                                      const BlockOptions& options = {});

struct NearestNeighborTable {
  std::vector<std::string> query_ids;
  std::vector<std::size_t> match_index;
  std::vector<std::string> match_ids;
  std::vector<float> rho;
};

struct NearestOptions {
  std::size_t block = 64;
  std::size_t threads = 0;
  // Upper bound on correlation entries held per tile. The full matrix is
  // never materialized.
  std::size_t max_tile_entries = std::size_t{1} << 20;
};

struct NearestStats {
  std::size_t tile_rows = 0;
  std::size_t tile_cols = 0;
};

// For every query row, the pool row with the highest correlation (compared as
// stored float values); ties go to the lowest pool index.
NearestNeighborTable Nearest(const VectorSet& queries, const VectorSet& pool,
                             const NearestOptions& options = {},
                             NearestStats* stats = nullptr);

}  // namespace memaudit::similarity

#endif  // MEMAUDIT_SIMILARITY_SIMILARITY_H_
