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

#include "metrics/fid.h"

#include <Eigen/Dense>
#include <cmath>

#include "core/error.h"

namespace memaudit::metrics {
namespace {

constexpr double kEigenTolerance = 1e-6;

using Matrix = Eigen::MatrixXd;

Matrix AsMatrix(const GaussianSummary& g) {
  const auto n = static_cast<Eigen::Index>(g.dim());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = g.sigma[static_cast<std::size_t>(i * n + j)];
    }
  }
  return m;
}

Eigen::VectorXd ClampedEigenvalues(const Eigen::VectorXd& values,
                                   const char* what) {
  Eigen::VectorXd out = values;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < -kEigenTolerance) {
      Throw(ErrorCode::kNumerical,
            std::string(what) + " is not positive semi-definite (eigenvalue " +
                std::to_string(out(i)) + ")");
    }
    if (out(i) < 0.0) out(i) = 0.0;
  }
  return out;
}

}  // namespace

GaussianSummary SummarizeGaussian(const VectorSet& set) {
  const std::size_t n = set.rows(), l = set.cols();
  Check(n >= 2, ErrorCode::kInvalidArgument,
        "Gaussian summary needs at least 2 rows");
  GaussianSummary g;
  g.mu.assign(l, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = set.row(i);
    for (std::size_t k = 0; k < l; ++k) g.mu[k] += r[k];
  }
  for (double& m : g.mu) m /= static_cast<double>(n);
  g.sigma.assign(l * l, 0.0);
  std::vector<double> c(l);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = set.row(i);
    for (std::size_t k = 0; k < l; ++k) c[k] = r[k] - g.mu[k];
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t b = a; b < l; ++b) g.sigma[a * l + b] += c[a] * c[b];
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = a; b < l; ++b) {
      g.sigma[a * l + b] /= denom;
      g.sigma[b * l + a] = g.sigma[a * l + b];
    }
  }
  return g;
}

void Validate(const GaussianSummary& g) {
  const std::size_t l = g.dim();
  Check(l >= 1 && g.sigma.size() == l * l, ErrorCode::kInvalidArgument,
        "covariance shape mismatch");
  for (double v : g.mu) {
    Check(std::isfinite(v), ErrorCode::kInvalidArgument, "non-finite mean");
  }
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < l; ++b) {
      const double v = g.sigma[a * l + b];
      Check(std::isfinite(v), ErrorCode::kInvalidArgument,
            "non-finite covariance");
      Check(std::abs(v - g.sigma[b * l + a]) <= 1e-6,
            ErrorCode::kInvalidArgument, "covariance is not symmetric");
    }
  }
}

double FrechetDistance(const GaussianSummary& a, const GaussianSummary& b) {
  Validate(a);
  Validate(b);
  Check(a.dim() == b.dim(), ErrorCode::kInvalidArgument,
        "dimension mismatch between Gaussian summaries");
  double mean_term = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double d = a.mu[k] - b.mu[k];
    mean_term += d * d;
  }
  const Matrix sa = AsMatrix(a);
  const Matrix sb = AsMatrix(b);

  Eigen::SelfAdjointEigenSolver<Matrix> eig_a(sa);
  const Eigen::VectorXd lambda_a =
      ClampedEigenvalues(eig_a.eigenvalues(), "first covariance");
  const Matrix root_a = eig_a.eigenvectors() *
                        lambda_a.cwiseSqrt().asDiagonal() *
                        eig_a.eigenvectors().transpose();
  Matrix inner = root_a * sb * root_a;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig_inner(inner, Eigen::EigenvaluesOnly);
  // The inner product inherits tolerance issues from both inputs; validate
  // sb separately so a non-PSD second argument is reported as such.
  Eigen::SelfAdjointEigenSolver<Matrix> eig_b(sb, Eigen::EigenvaluesOnly);
  ClampedEigenvalues(eig_b.eigenvalues(), "second covariance");
  const Eigen::VectorXd lambda_inner =
      ClampedEigenvalues(eig_inner.eigenvalues(), "covariance product");

  const double trace_term = sa.trace() + sb.trace() -
                            2.0 * lambda_inner.cwiseSqrt().sum();
  return std::max(0.0, mean_term + trace_term);
}

Json ToJson(const GaussianSummary& g) {
  Json j;
  j["mu"] = g.mu;
  j["sigma"] = g.sigma;
  return j;
}

}  // namespace memaudit::metrics
