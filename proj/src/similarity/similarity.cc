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

#include "similarity/similarity.h"

#include <algorithm>
#include <cmath>

#include "core/error.h"
#include "core/log.h"
#include "core/parallel.h"

namespace memaudit::similarity {
namespace {

// Mean-centered copy of a set's rows plus their Euclidean norms. Pearson()
// and the blocked kernels share this so both produce identical bits.
struct Centered {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<double> norms;
  std::size_t degenerate = 0;
};

void CenterInto(std::span<const float> x, double* out, double* norm) {
  double sum = 0.0;
  for (float v : x) sum += v;
  const double mean = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    out[k] = static_cast<double>(x[k]) - mean;
    ss += out[k] * out[k];
  }
  *norm = std::sqrt(ss);
}

Centered Center(const VectorSet& set) {
  Centered c;
  c.rows = set.rows();
  c.cols = set.cols();
  c.values.resize(c.rows * c.cols);
  c.norms.resize(c.rows);
  for (std::size_t i = 0; i < c.rows; ++i) {
    CenterInto(set.row(i), &c.values[i * c.cols], &c.norms[i]);
    if (c.norms[i] == 0.0) ++c.degenerate;
  }
  return c;
}

double CorrelateCentered(const double* a, double norm_a, const double* b,
                         double norm_b, std::size_t n) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t k = 0; k < n; ++k) dot += a[k] * b[k];
  return std::clamp(dot / (norm_a * norm_b), -1.0, 1.0);
}

void WarnDegenerate(const Centered& c, const char* which) {
  if (c.degenerate > 0) {
    Warn(std::to_string(c.degenerate) + " zero-variance row(s) in " + which +
         " set; their correlations are reported as 0");
  }
}

void CheckCompatible(const VectorSet& a, const VectorSet& b) {
  Check(a.cols() == b.cols(), ErrorCode::kInvalidArgument,
        "dimension mismatch: " + std::to_string(a.cols()) + " vs " +
            std::to_string(b.cols()));
}

}  // namespace

double Pearson(std::span<const float> a, std::span<const float> b) {
  Check(a.size() == b.size(), ErrorCode::kInvalidArgument,
        "pearson: length mismatch");
  Check(a.size() >= 2, ErrorCode::kInvalidArgument,
        "pearson: need at least 2 components");
  std::vector<double> ca(a.size()), cb(b.size());
  double na = 0.0, nb = 0.0;
  CenterInto(a, ca.data(), &na);
  CenterInto(b, cb.data(), &nb);
  if (na == 0.0 || nb == 0.0) {
    Warn("pearson: zero-variance input; correlation reported as 0");
    return 0.0;
  }
  return CorrelateCentered(ca.data(), na, cb.data(), nb, a.size());
}

CorrelationMatrix PairwiseCorrelation(const VectorSet& a, const VectorSet& b,
                                      const BlockOptions& options) {
  CheckCompatible(a, b);
  const std::size_t block = std::max<std::size_t>(1, options.block);
  const Centered ca = Center(a);
  const Centered cb = Center(b);
  WarnDegenerate(ca, "first");
  WarnDegenerate(cb, "second");

  CorrelationMatrix out;
  out.rows = a.rows();
  out.cols = b.rows();
  out.values.resize(out.rows * out.cols);
  const std::size_t n = a.cols();
  const std::size_t row_blocks = (out.rows + block - 1) / block;
  ParallelFor(row_blocks, options.threads, [&](std::size_t rb) {
    const std::size_t i0 = rb * block;
    const std::size_t i1 = std::min(out.rows, i0 + block);
    for (std::size_t j0 = 0; j0 < out.cols; j0 += block) {
      const std::size_t j1 = std::min(out.cols, j0 + block);
      for (std::size_t i = i0; i < i1; ++i) {
        const double* ai = &ca.values[i * n];
        for (std::size_t j = j0; j < j1; ++j) {
          out.values[i * out.cols + j] = static_cast<float>(CorrelateCentered(
              ai, ca.norms[i], &cb.values[j * n], cb.norms[j], n));
        }
      }
    }
  });
  return out;
}

NearestNeighborTable Nearest(const VectorSet& queries, const VectorSet& pool,
                             const NearestOptions& options,
                             NearestStats* stats) {
  CheckCompatible(queries, pool);
  const Centered cq = Center(queries);
  const Centered cp = Center(pool);
  WarnDegenerate(cq, "query");
  WarnDegenerate(cp, "candidate");

  const std::size_t budget = std::max<std::size_t>(1, options.max_tile_entries);
  const std::size_t tile_rows =
      std::clamp<std::size_t>(options.block, 1, budget);
  const std::size_t tile_cols = std::clamp<std::size_t>(
      std::min(options.block, pool.rows()), 1, budget / tile_rows);
  if (stats != nullptr) {
    stats->tile_rows = tile_rows;
    stats->tile_cols = tile_cols;
  }

  const std::size_t nq = queries.rows();
  const std::size_t n = queries.cols();
  std::vector<std::size_t> best(nq, 0);
  std::vector<float> best_rho(nq, 0.0f);
  const std::size_t row_blocks = (nq + tile_rows - 1) / tile_rows;
  ParallelFor(row_blocks, options.threads, [&](std::size_t rb) {
    const std::size_t i0 = rb * tile_rows;
    const std::size_t i1 = std::min(nq, i0 + tile_rows);
    std::vector<float> tile(tile_rows * tile_cols);
    for (std::size_t j0 = 0; j0 < pool.rows(); j0 += tile_cols) {
      const std::size_t j1 = std::min(pool.rows(), j0 + tile_cols);
      for (std::size_t i = i0; i < i1; ++i) {
        const double* qi = &cq.values[i * n];
        float* trow = &tile[(i - i0) * tile_cols];
        for (std::size_t j = j0; j < j1; ++j) {
          trow[j - j0] = static_cast<float>(CorrelateCentered(
              qi, cq.norms[i], &cp.values[j * n], cp.norms[j], n));
        }
      }
      // Candidates arrive in ascending index order, so strict '>' keeps the
      // lowest index among ties.
      for (std::size_t i = i0; i < i1; ++i) {
        const float* trow = &tile[(i - i0) * tile_cols];
        for (std::size_t j = j0; j < j1; ++j) {
          if (j == 0 || trow[j - j0] > best_rho[i]) {
            best_rho[i] = trow[j - j0];
            best[i] = j;
          }
        }
      }
    }
  });

  NearestNeighborTable table;
  table.query_ids = queries.ids();
  table.match_index = std::move(best);
  table.rho = std::move(best_rho);
  table.match_ids.reserve(nq);
  for (std::size_t idx : table.match_index) {
    table.match_ids.push_back(pool.ids()[idx]);
  }
  return table;
}

}  // namespace memaudit::similarity
