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

#include "contrastive/trainer.h"

#include <cmath>
#include <sstream>

#include "contrastive/nt_xent.h"
#include "core/error.h"

namespace memaudit::contrastive {
namespace {

constexpr std::uint64_t kShuffleStream = 0x73687566;  // "shuf"
constexpr std::uint64_t kAugmentStream = 0x61756776;  // "augv"

}  // namespace

void Validate(const TrainConfig& cfg) {
  Check(cfg.batch_k >= 2, ErrorCode::kInvalidArgument, "batch_k must be >= 2");
  Check(cfg.learning_rate > 0.0, ErrorCode::kInvalidArgument,
        "learning_rate must be positive");
  Check(cfg.momentum >= 0.0 && cfg.momentum < 1.0, ErrorCode::kInvalidArgument,
        "momentum must lie in [0, 1)");
  Check(cfg.tau_temp > 0.0, ErrorCode::kInvalidArgument,
        "tau_temp must be positive");
  Check(cfg.embedding_dim >= 2, ErrorCode::kInvalidArgument,
        "embedding_dim must be >= 2");
  for (std::size_t h : cfg.hidden_dims) {
    Check(h > 0, ErrorCode::kInvalidArgument, "hidden dims must be positive");
  }
}

Json ToJson(const TrainConfig& cfg) {
  Json j;
  j["batch_k"] = cfg.batch_k;
  j["epochs"] = cfg.epochs;
  j["learning_rate"] = cfg.learning_rate;
  j["momentum"] = cfg.momentum;
  j["tau_temp"] = cfg.tau_temp;
  j["seed"] = cfg.seed;
  j["hidden_dims"] = cfg.hidden_dims;
  j["embedding_dim"] = cfg.embedding_dim;
  return j;
}

TrainConfig TrainConfigFromJson(const Json& j) {
  RejectUnknownKeys(j,
                    {"batch_k", "epochs", "learning_rate", "momentum",
                     "tau_temp", "seed", "hidden_dims", "embedding_dim"},
                    "train config");
  TrainConfig c;
  try {
    c.batch_k = UnsignedOr(j, "batch_k", c.batch_k);
    c.epochs = UnsignedOr(j, "epochs", c.epochs);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.momentum = j.value("momentum", c.momentum);
    c.tau_temp = j.value("tau_temp", c.tau_temp);
    c.seed = UnsignedOr(j, "seed", c.seed);
    c.hidden_dims = j.value("hidden_dims", c.hidden_dims);
    c.embedding_dim = UnsignedOr(j, "embedding_dim", c.embedding_dim);
  } catch (const Json::exception& e) {
    Throw(ErrorCode::kInvalidArgument, std::string("train config: ") + e.what());
  }
  Validate(c);
  return c;
}

AugmentHook JitterHook(const VectorSet& features, double sigma) {
  return [&features, sigma](std::size_t index, Rng& rng) {
    const auto row = features.row(index);
    std::vector<float> out(row.begin(), row.end());
    for (float& v : out) v += static_cast<float>(sigma * rng.Normal());
    return out;
  };
}

TrainResult TrainEncoder(const VectorSet& features, const TrainConfig& cfg,
                         const AugmentHook& aug) {
  Validate(cfg);
  const std::size_t n = features.rows();
  const std::size_t k = cfg.batch_k;
  Check(n >= 2 * k, ErrorCode::kInvalidArgument,
        "need at least 2K training rows (N=" + std::to_string(n) +
            ", K=" + std::to_string(k) + ")");
  Check(static_cast<bool>(aug), ErrorCode::kInvalidArgument,
        "augmentation hook is required");

  std::vector<std::size_t> dims = {features.cols()};
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(cfg.embedding_dim);
  EncoderModel init = InitEncoder(dims, cfg.tau_temp, cfg.seed);

  TrainResult result{init, {}};
  if (cfg.epochs == 0) return result;

  const Network net(dims);
  const std::size_t dim_out = cfg.embedding_dim;
  std::vector<double> params(init.params().begin(), init.params().end());
  std::vector<double> velocity(params.size(), 0.0);
  std::vector<double> grad(params.size());
  std::vector<Network::Activations> acts(2 * k);
  std::vector<double> emb(2 * k * dim_out);
  std::vector<double> emb_grad;
  std::vector<double> input;

  const Rng root(cfg.seed);
  const std::size_t batches = n / k;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle = root.Split(kShuffleStream).Split(epoch);
    const auto order = shuffle.Permutation(n);
    const Rng aug_root = root.Split(kAugmentStream).Split(epoch);
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      for (std::size_t p = 0; p < k; ++p) {
        const std::size_t row = order[b * k + p];
        const auto original = features.row(row);
        Rng view_rng = aug_root.Split(row);
        const std::vector<float> view = aug(row, view_rng);
        Check(view.size() == features.cols(), ErrorCode::kInvalidArgument,
              "augmentation hook changed the feature length");
        input.assign(original.begin(), original.end());
        net.Forward(params, input, &acts[2 * p]);
        input.assign(view.begin(), view.end());
        net.Forward(params, input, &acts[2 * p + 1]);
      }
      for (std::size_t i = 0; i < 2 * k; ++i) {
        std::copy(acts[i].back().begin(), acts[i].back().end(),
                  emb.begin() + static_cast<std::ptrdiff_t>(i * dim_out));
      }
      const double loss =
          NtXentLossAndGradient({emb, dim_out}, cfg.tau_temp, &emb_grad);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite NT-Xent loss at epoch " << epoch << ", batch " << b
            << "; lower the learning rate or raise tau_temp";
        Throw(ErrorCode::kNumerical, msg.str());
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < 2 * k; ++i) {
        net.Backward(params, acts[i],
                     std::span(emb_grad).subspan(i * dim_out, dim_out), grad);
      }
      for (std::size_t q = 0; q < params.size(); ++q) {
        velocity[q] = cfg.momentum * velocity[q] - cfg.learning_rate * grad[q];
        params[q] += velocity[q];
      }
      epoch_loss += loss;
    }
    result.loss_trace.push_back(epoch_loss / static_cast<double>(batches));
  }

  std::vector<float> final_params(params.begin(), params.end());
  for (float v : final_params) {
    Check(std::isfinite(v), ErrorCode::kNumerical,
          "training produced non-finite parameters");
  }
  result.model = EncoderModel(dims, std::move(final_params), cfg.tau_temp,
                              cfg.seed);
  return result;
}

VectorSet Embed(const EncoderModel& model, const VectorSet& features) {
  Check(features.cols() == model.input_dim(), ErrorCode::kInvalidArgument,
        "dimension mismatch: encoder expects " +
            std::to_string(model.input_dim()) + " features, set has " +
            std::to_string(features.cols()));
  const Network net(model.layer_dims());
  const std::vector<double> params(model.params().begin(),
                                   model.params().end());
  std::vector<float> out;
  out.reserve(features.rows() * model.embedding_dim());
  Network::Activations acts;
  std::vector<double> input;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto row = features.row(i);
    input.assign(row.begin(), row.end());
    net.Forward(params, input, &acts);
    for (double v : acts.back()) out.push_back(static_cast<float>(v));
  }
  return VectorSet(features.role(), features.ids(), model.embedding_dim(),
                   std::move(out));
}

}  // namespace memaudit::contrastive
