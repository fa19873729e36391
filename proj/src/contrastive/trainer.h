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

#ifndef MEMAUDIT_CONTRASTIVE_TRAINER_H_
#define MEMAUDIT_CONTRASTIVE_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "contrastive/encoder.h"
#include "core/json.h"
#include "core/rng.h"
#include "core/vector_set.h"

namespace memaudit::contrastive {

struct TrainConfig {
  std::size_t batch_k = 25;  // pairs per batch; the batch holds 2K views
  std::size_t epochs = 800;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double tau_temp = 0.5;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden_dims = {128, 64};
  std::size_t embedding_dim = 32;
};

void Validate(const TrainConfig& cfg);
Json ToJson(const TrainConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
TrainConfig TrainConfigFromJson(const Json& j);

// Produces the augmented view of training row `index`. Must be a pure
// function of (index, rng state).
using AugmentHook =
    std::function<std::vector<float>(std::size_t index, Rng& rng)>;

// Adds independent N(0, sigma^2) noise to every feature.
AugmentHook JitterHook(const VectorSet& features, double sigma);

struct TrainResult {
  EncoderModel model;
  std::vector<double> loss_trace;  // mean batch loss per epoch
};

// Mini-batch SGD with momentum on the mean NT-Xent loss. Each epoch shuffles
// the rows with a seed-derived permutation, drops the remainder, and pairs
// every row with aug(row). Throws kNumerical on a non-finite loss.
TrainResult TrainEncoder(const VectorSet& features, const TrainConfig& cfg,
                         const AugmentHook& aug);

// Forward pass over every row of `features`.
VectorSet Embed(const EncoderModel& model, const VectorSet& features);

}  // namespace memaudit::contrastive

#endif  // MEMAUDIT_CONTRASTIVE_TRAINER_H_
