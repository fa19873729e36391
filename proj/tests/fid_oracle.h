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

#ifndef MEMAUDIT_TESTS_FID_ORACLE_H_
#define MEMAUDIT_TESTS_FID_ORACLE_H_

// Frechet distance via Jacobi eigendecomposition, independent of Eigen.

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/rng.h"
#include "metrics/fid.h"

namespace memaudit::testing {

using metrics::GaussianSummary;

using Mat = std::vector<std::vector<double>>;

inline Mat Multiply(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Cyclic Jacobi rotations; returns eigenvalues and eigenvectors (columns).
inline void Jacobi(Mat a, std::vector<double>* w, Mat* v) {
  const std::size_t n = a.size();
  *v = Mat(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) (*v)[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1 : -1) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = (*v)[k][p], vkq = (*v)[k][q];
          (*v)[k][p] = c * vkp - s * vkq;
          (*v)[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  w->resize(n);
  for (std::size_t i = 0; i < n; ++i) (*w)[i] = a[i][i];
}

inline Mat SqrtPsd(const Mat& m) {
  std::vector<double> w;
  Mat v;
  Jacobi(m, &w, &v);
  const std::size_t n = m.size();
  Mat r(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(w[k], 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += s * v[i][k] * v[j][k];
  }
  return r;
}

inline double OracleFid(const GaussianSummary& a, const GaussianSummary& b) {
  const std::size_t n = a.dim();
  auto mat = [n](const std::vector<double>& flat) {
    Mat m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = flat[i * n + j];
    return m;
  };
  const Mat sa = mat(a.sigma), sb = mat(b.sigma);
  const Mat ra = SqrtPsd(sa);
  Mat inner = Multiply(Multiply(ra, sb), ra);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      inner[i][j] = inner[j][i] = 0.5 * (inner[i][j] + inner[j][i]);
  const Mat root = SqrtPsd(inner);
  double d = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d += (a.mu[i] - b.mu[i]) * (a.mu[i] - b.mu[i]);
    d += sa[i][i] + sb[i][i] - 2 * root[i][i];
  }
  return d;
}

inline GaussianSummary RandomPsd(std::size_t n, Rng& rng) {
  GaussianSummary g;
  g.mu.resize(n);
  for (double& m : g.mu) m = rng.Normal();
  Mat a(n, std::vector<double>(n + 2));
  for (auto& row : a)
    for (double& x : row) x = rng.Normal();
  g.sigma.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n + 2; ++k)
        g.sigma[i * n + j] += a[i][k] * a[j][k] / double(n + 2);
  return g;
}

}  // namespace memaudit::testing

#endif  // MEMAUDIT_TESTS_FID_ORACLE_H_
