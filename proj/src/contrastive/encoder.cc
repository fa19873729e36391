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

#include "contrastive/encoder.h"

#include <cmath>
#include <string_view>

#include "core/binary_io.h"
#include "core/error.h"
#include "core/json.h"
#include "core/rng.h"

namespace memaudit::contrastive {
namespace {

constexpr std::string_view kFormatTag = "memaudit-encoder/1";
constexpr std::uint64_t kInitStream = 0x696e6974;  // "init"

void CheckDims(const std::vector<std::size_t>& dims) {
  Check(dims.size() >= 2, ErrorCode::kInvalidArgument,
        "encoder needs at least one layer");
  for (std::size_t d : dims) {
    Check(d > 0, ErrorCode::kInvalidArgument, "layer dims must be positive");
  }
}

}  // namespace

std::size_t ParamCount(const std::vector<std::size_t>& dims) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    n += dims[l + 1] * dims[l] + dims[l + 1];
  }
  return n;
}

EncoderModel::EncoderModel(std::vector<std::size_t> layer_dims,
                           std::vector<float> params, double tau_temp,
                           std::uint64_t seed)
    : layer_dims_(std::move(layer_dims)),
      params_(std::move(params)),
      tau_temp_(tau_temp),
      seed_(seed) {
  CheckDims(layer_dims_);
  Check(params_.size() == ParamCount(layer_dims_), ErrorCode::kInvalidArgument,
        "parameter count does not match layer dims");
  for (float p : params_) {
    Check(std::isfinite(p), ErrorCode::kInvalidArgument,
          "non-finite encoder parameter");
  }
  Check(tau_temp_ > 0.0 && std::isfinite(tau_temp_),
        ErrorCode::kInvalidArgument, "tau_temp must be positive");
}

EncoderModel InitEncoder(std::vector<std::size_t> layer_dims, double tau_temp,
                         std::uint64_t seed) {
  CheckDims(layer_dims);
  Rng rng = Rng(seed).Split(kInitStream);
  std::vector<float> params;
  params.reserve(ParamCount(layer_dims));
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const std::size_t in = layer_dims[l], out = layer_dims[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (std::size_t k = 0; k < in * out; ++k) {
      params.push_back(static_cast<float>(rng.Uniform(-limit, limit)));
    }
    params.insert(params.end(), out, 0.0f);
  }
  return EncoderModel(std::move(layer_dims), std::move(params), tau_temp, seed);
}

Network::Network(std::vector<std::size_t> layer_dims)
    : dims_(std::move(layer_dims)) {
  CheckDims(dims_);
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    offsets_.push_back(num_params_);
    num_params_ += dims_[l + 1] * dims_[l] + dims_[l + 1];
  }
}

void Network::Forward(std::span<const double> params, std::span<const double> x,
                      Activations* acts) const {
  Check(x.size() == dims_.front(), ErrorCode::kInvalidArgument,
        "encoder input has length " + std::to_string(x.size()) +
            ", expected " + std::to_string(dims_.front()));
  const std::size_t layers = dims_.size() - 1;
  acts->resize(layers + 1);
  (*acts)[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = dims_[l], out = dims_[l + 1];
    const double* w = params.data() + offsets_[l];
    const double* b = w + in * out;
    const auto& h = (*acts)[l];
    auto& z = (*acts)[l + 1];
    z.resize(out);
    const bool hidden = l + 1 < layers;
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      for (std::size_t i = 0; i < in; ++i) s += w[o * in + i] * h[i];
      z[o] = hidden ? std::tanh(s) : s;
    }
  }
}

void Network::Backward(std::span<const double> params, const Activations& acts,
                       std::span<const double> grad_out,
                       std::span<double> grad) const {
  const std::size_t layers = dims_.size() - 1;
  std::vector<double> delta(grad_out.begin(), grad_out.end());
  std::vector<double> prev;
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = dims_[l], out = dims_[l + 1];
    if (l + 1 < layers) {
      const auto& h = acts[l + 1];
      for (std::size_t o = 0; o < out; ++o) delta[o] *= 1.0 - h[o] * h[o];
    }
    const double* w = params.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = gw + in * out;
    const auto& x = acts[l];
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * x[i];
      gb[o] += delta[o];
    }
    if (l == 0) break;
    prev.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t i = 0; i < in; ++i) prev[i] += w[o * in + i] * delta[o];
    }
    delta.swap(prev);
  }
}

std::vector<float> EncoderForward(const EncoderModel& model,
                                  std::span<const float> x) {
  Check(x.size() == model.input_dim(), ErrorCode::kInvalidArgument,
        "dimension mismatch: encoder expects " +
            std::to_string(model.input_dim()) + " inputs, got " +
            std::to_string(x.size()));
  const Network net(model.layer_dims());
  const std::vector<double> params(model.params().begin(),
                                   model.params().end());
  const std::vector<double> input(x.begin(), x.end());
  Network::Activations acts;
  net.Forward(params, input, &acts);
  return {acts.back().begin(), acts.back().end()};
}

std::vector<unsigned char> EncodeModel(const EncoderModel& model) {
  Json header;
  header["format"] = kFormatTag;
  header["layer_dims"] = model.layer_dims();
  header["activation"] = EncoderModel::kActivation;
  header["tau_temp"] = model.tau_temp();
  header["seed"] = model.seed();
  header["pool_grid"] = model.pool_grid();
  header["param_count"] = model.params().size();
  io::Writer w;
  w.Bytes(header.dump());
  w.U8('\n');
  for (float p : model.params()) w.F32(p);
  return std::move(w.buffer());
}

EncoderModel DecodeModel(std::span<const unsigned char> bytes) {
  std::size_t nl = 0;
  while (nl < bytes.size() && bytes[nl] != '\n') ++nl;
  if (nl == bytes.size()) Throw(ErrorCode::kFormat, "model header missing");
  Json header;
  try {
    header = Json::parse(bytes.begin(), bytes.begin() + nl);
  } catch (const Json::parse_error& e) {
    Throw(ErrorCode::kFormat, std::string("model header: ") + e.what());
  }
  try {
    if (header.at("format").get<std::string>() != kFormatTag) {
      Throw(ErrorCode::kFormat, "unsupported model format");
    }
    if (header.at("activation").get<std::string>() !=
        EncoderModel::kActivation) {
      Throw(ErrorCode::kFormat, "unsupported activation");
    }
    auto dims = header.at("layer_dims").get<std::vector<std::size_t>>();
    const auto count = header.at("param_count").get<std::size_t>();
    io::Reader r(bytes.subspan(nl + 1), "model");
    if (r.remaining() != count * 4) {
      Throw(ErrorCode::kFormat, "model weight blob size mismatch");
    }
    std::vector<float> params(count);
    for (auto& p : params) p = r.F32();
    EncoderModel model(std::move(dims), std::move(params),
                       header.at("tau_temp").get<double>(),
                       header.at("seed").get<std::uint64_t>());
    model.set_pool_grid(
        header.value("pool_grid", std::vector<std::size_t>{}));
    return model;
  } catch (const Json::exception& e) {
    Throw(ErrorCode::kFormat, std::string("model header: ") + e.what());
  } catch (const Error& e) {
    Throw(ErrorCode::kFormat, e.what());
  }
}

void WriteModel(const EncoderModel& model, const std::filesystem::path& path) {
  io::WriteFile(path, EncodeModel(model));
}

EncoderModel ReadModel(const std::filesystem::path& path) {
  const auto bytes = io::ReadFile(path);
  try {
    return DecodeModel(bytes);
  } catch (const Error& e) {
    Throw(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace memaudit::contrastive
