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

#include "contrastive/grad_check.h"

#include <algorithm>
#include <cmath>

#include "contrastive/nt_xent.h"
#include "core/error.h"

namespace memaudit::contrastive {
namespace {

constexpr double kStep = 1e-5;

std::size_t Rows(const Network& net, InputBatch batch) {
  Check(batch.dim == net.layer_dims().front() &&
            batch.data.size() % batch.dim == 0,
        ErrorCode::kInvalidArgument, "batch does not match encoder input");
  return batch.data.size() / batch.dim;
}

std::vector<double> Embeddings(const Network& net,
                               std::span<const double> params, InputBatch batch,
                               std::vector<Network::Activations>* acts) {
  const std::size_t rows = Rows(net, batch);
  const std::size_t out = net.layer_dims().back();
  acts->resize(rows);
  std::vector<double> emb(rows * out), input;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto x = batch.data.subspan(i * batch.dim, batch.dim);
    input.assign(x.begin(), x.end());
    net.Forward(params, input, &(*acts)[i]);
    std::copy((*acts)[i].back().begin(), (*acts)[i].back().end(),
              emb.begin() + static_cast<std::ptrdiff_t>(i * out));
  }
  return emb;
}

}  // namespace

double BatchLoss(const Network& net, std::span<const double> params,
                 InputBatch batch, double tau_temp) {
  std::vector<Network::Activations> acts;
  const auto emb = Embeddings(net, params, batch, &acts);
  return NtXentLoss({emb, net.layer_dims().back()}, tau_temp);
}

std::vector<double> AnalyticGradient(const Network& net,
                                     std::span<const double> params,
                                     InputBatch batch, double tau_temp) {
  std::vector<Network::Activations> acts;
  const auto emb = Embeddings(net, params, batch, &acts);
  const std::size_t out = net.layer_dims().back();
  std::vector<double> emb_grad;
  NtXentLossAndGradient({emb, out}, tau_temp, &emb_grad);
  std::vector<double> grad(net.num_params(), 0.0);
  for (std::size_t i = 0; i < acts.size(); ++i) {
    net.Backward(params, acts[i], std::span(emb_grad).subspan(i * out, out),
                 grad);
  }
  return grad;
}

GradCheckResult GradCheck(const EncoderModel& model, InputBatch batch,
                          double tau_temp, const GradientFn& analytic) {
  const Network net(model.layer_dims());
  std::vector<double> params(model.params().begin(), model.params().end());
  const std::vector<double> a = analytic(net, params, batch, tau_temp);
  Check(a.size() == params.size(), ErrorCode::kInvalidArgument,
        "analytic gradient has wrong length");

  std::vector<double> numeric(params.size());
  for (std::size_t q = 0; q < params.size(); ++q) {
    const double saved = params[q];
    params[q] = saved + kStep;
    const double up = BatchLoss(net, params, batch, tau_temp);
    params[q] = saved - kStep;
    const double down = BatchLoss(net, params, batch, tau_temp);
    params[q] = saved;
    numeric[q] = (up - down) / (2.0 * kStep);
  }

  GradCheckResult r;
  for (std::size_t q = 0; q < params.size(); ++q) {
    r.max_abs_analytic = std::max(r.max_abs_analytic, std::abs(a[q]));
    r.max_abs_numeric = std::max(r.max_abs_numeric, std::abs(numeric[q]));
  }
  const double floor = std::max(1e-3 * r.max_abs_numeric, 1e-8);
  for (std::size_t q = 0; q < params.size(); ++q) {
    const double denom =
        std::max({std::abs(a[q]), std::abs(numeric[q]), floor});
    r.max_relative_error =
        std::max(r.max_relative_error, std::abs(a[q] - numeric[q]) / denom);
  }
  return r;
}

}  // namespace memaudit::contrastive
