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

#include "contrastive/nt_xent.h"

#include <algorithm>
#include <cmath>

#include "core/error.h"

namespace memaudit::contrastive {
namespace {

std::size_t CheckBatch(BatchEmbeddings batch, double tau_temp) {
  Check(batch.dim > 0 && batch.data.size() % batch.dim == 0,
        ErrorCode::kInvalidArgument, "embedding matrix shape mismatch");
  const std::size_t n = batch.data.size() / batch.dim;
  Check(n % 2 == 0, ErrorCode::kInvalidArgument,
        "NT-Xent needs an even batch of paired views");
  Check(n >= 4, ErrorCode::kInvalidArgument, "NT-Xent needs K >= 2 pairs");
  Check(tau_temp > 0.0, ErrorCode::kInvalidArgument,
        "tau_temp must be positive");
  return n;
}

}  // namespace

double CosineSimilarity(std::span<const float> a, std::span<const float> b) {
  Check(a.size() == b.size(), ErrorCode::kInvalidArgument,
        "cosine: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += static_cast<double>(a[k]) * b[k];
    na += static_cast<double>(a[k]) * a[k];
    nb += static_cast<double>(b[k]) * b[k];
  }
  Check(na > 0.0 && nb > 0.0, ErrorCode::kInvalidArgument,
        "cosine similarity of a zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double NtXentLoss(BatchEmbeddings batch, double tau_temp) {
  return NtXentLossAndGradient(batch, tau_temp, nullptr);
}

double NtXentLossAndGradient(BatchEmbeddings batch, double tau_temp,
                             std::vector<double>* grad) {
  const std::size_t n = CheckBatch(batch, tau_temp);
  const std::size_t dim = batch.dim;

  std::vector<double> unit(n * dim), norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      ss += batch.data[i * dim + k] * batch.data[i * dim + k];
    }
    norm[i] = std::sqrt(ss);
    Check(norm[i] > 0.0, ErrorCode::kNumerical,
          "NT-Xent: zero-norm embedding at row " + std::to_string(i));
    for (std::size_t k = 0; k < dim; ++k) {
      unit[i * dim + k] = batch.data[i * dim + k] / norm[i];
    }
  }
  std::vector<double> sim(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        s += unit[i * dim + k] * unit[j * dim + k];
      }
      sim[i * n + j] = s;
    }
  }

  // coef[i][j] = d(loss)/d(sim[i][j]) treating sim[i][j], sim[j][i] as
  // separate inputs.
  std::vector<double> coef(grad ? n * n : 0, 0.0);
  const double inv_t = 1.0 / tau_temp;
  const double anchor_weight = 1.0 / static_cast<double>(n);
  double total = 0.0;
  std::vector<double> logits(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t partner = i ^ 1;
    double max_logit = -INFINITY;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      logits[j] = sim[i * n + j] * inv_t;
      max_logit = std::max(max_logit, logits[j]);
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) denom += std::exp(logits[j] - max_logit);
    }
    const double log_denom = max_logit + std::log(denom);
    total += log_denom - logits[partner];
    if (grad) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double p = std::exp(logits[j] - log_denom);
        coef[i * n + j] =
            anchor_weight * inv_t * (p - (j == partner ? 1.0 : 0.0));
      }
    }
  }
  const double loss = total * anchor_weight;
  if (!grad) return loss;

  grad->assign(n * dim, 0.0);
  std::vector<double> du(dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(du.begin(), du.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double c = coef[i * n + j] + coef[j * n + i];
      if (c == 0.0) continue;
      for (std::size_t k = 0; k < dim; ++k) du[k] += c * unit[j * dim + k];
    }
    // Project out the radial component: d(e/|e|)/de = (I - u u^T) / |e|.
    double radial = 0.0;
    for (std::size_t k = 0; k < dim; ++k) radial += du[k] * unit[i * dim + k];
    for (std::size_t k = 0; k < dim; ++k) {
      (*grad)[i * dim + k] = (du[k] - radial * unit[i * dim + k]) / norm[i];
    }
  }
  return loss;
}

}  // namespace memaudit::contrastive
