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

#ifndef MEMAUDIT_CONTRASTIVE_ENCODER_H_
#define MEMAUDIT_CONTRASTIVE_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace memaudit::contrastive {

// Feedforward encoder: tanh on hidden layers, identity on the output layer.
// Parameters are stored flat, layer by layer, each layer as its weight matrix
// (out x in, row-major) followed by its bias vector.
class EncoderModel {
 public:
  EncoderModel(std::vector<std::size_t> layer_dims, std::vector<float> params,
               double tau_temp, std::uint64_t seed);

  const std::vector<std::size_t>& layer_dims() const { return layer_dims_; }
  std::size_t input_dim() const { return layer_dims_.front(); }
  std::size_t embedding_dim() const { return layer_dims_.back(); }
  std::size_t num_layers() const { return layer_dims_.size() - 1; }
  std::span<const float> params() const { return params_; }
  double tau_temp() const { return tau_temp_; }
  std::uint64_t seed() const { return seed_; }
  static constexpr const char* kActivation = "tanh";

  // Feature-pooling grid the model was trained with; informational.
  const std::vector<std::size_t>& pool_grid() const { return pool_grid_; }
  void set_pool_grid(std::vector<std::size_t> grid) { pool_grid_ = std::move(grid); }

  bool operator==(const EncoderModel&) const = default;

 private:
  std::vector<std::size_t> layer_dims_;
  std::vector<float> params_;
  double tau_temp_;
  std::uint64_t seed_;
  std::vector<std::size_t> pool_grid_;
};

std::size_t ParamCount(const std::vector<std::size_t>& layer_dims);

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
EncoderModel InitEncoder(std::vector<std::size_t> layer_dims, double tau_temp,
                         std::uint64_t seed);

std::vector<float> EncoderForward(const EncoderModel& model,
                                  std::span<const float> x);

// Double-precision network used by training and gradient checking.
class Network {
 public:
  explicit Network(std::vector<std::size_t> layer_dims);

  std::size_t num_params() const { return num_params_; }
  const std::vector<std::size_t>& layer_dims() const { return dims_; }

  // Per-layer outputs of one forward pass; acts[0] is the input.
  using Activations = std::vector<std::vector<double>>;

  void Forward(std::span<const double> params, std::span<const double> x,
               Activations* acts) const;
  // Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void Backward(std::span<const double> params, const Activations& acts,
                std::span<const double> grad_out,
                std::span<double> grad) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;  // start of layer l's weights
  std::size_t num_params_ = 0;
};

std::vector<unsigned char> EncodeModel(const EncoderModel& model);
EncoderModel DecodeModel(std::span<const unsigned char> bytes);
void WriteModel(const EncoderModel& model, const std::filesystem::path& path);
EncoderModel ReadModel(const std::filesystem::path& path);

}  // namespace memaudit::contrastive

#endif  // MEMAUDIT_CONTRASTIVE_ENCODER_H_
