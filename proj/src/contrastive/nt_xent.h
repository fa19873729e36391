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

#ifndef MEMAUDIT_CONTRASTIVE_NT_XENT_H_
#define MEMAUDIT_CONTRASTIVE_NT_XENT_H_

#include <cstddef>
#include <span>
#include <vector>

namespace memaudit::contrastive {

// dot(a, b) / (|a| |b|). Zero-norm input is an error.
double CosineSimilarity(std::span<const float> a, std::span<const float> b);

// Embeddings of a batch ordered [e1, e1', e2, e2', ...]: rows 2k and 2k+1 are
// positive partners. `dim` is the embedding length; rows = data.size()/dim.
struct BatchEmbeddings {
  std::span<const double> data;
  std::size_t dim = 0;
};

// Mean over all 2K anchors of
//   -log( exp(s(i, p(i)) / t) / sum_{j != i} exp(s(i, j) / t) )
// with s the cosine similarity and t = tau_temp. Requires K >= 2.
double NtXentLoss(BatchEmbeddings batch, double tau_temp);

// Loss plus d(loss)/d(embeddings), same layout as batch.data.
double NtXentLossAndGradient(BatchEmbeddings batch, double tau_temp,
                             std::vector<double>* grad);

}  // namespace memaudit::contrastive

#endif  // MEMAUDIT_CONTRASTIVE_NT_XENT_H_
