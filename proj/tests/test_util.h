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

#ifndef MEMAUDIT_TESTS_TEST_UTIL_H_
#define MEMAUDIT_TESTS_TEST_UTIL_H_

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "core/binary_io.h"
#include "core/json.h"
#include "core/rng.h"
#include "core/tensor.h"
#include "core/vector_set.h"

namespace memaudit::testing {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(MEMAUDIT_TEST_DATA) / name;
}

inline const Json& Oracles() {
  static const Json j = ReadJsonFile(DataPath("oracles.json"));
  return j;
}

// Tensor exactly as stored, without load-time normalization.
inline ImageTensor RawTensor(const std::string& name) {
  return DecodeTensor(io::ReadFile(DataPath(name)));
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("memaudit_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::string> Ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

// Rows with independent N(0, 1) entries.
inline VectorSet RandomSet(Role role, std::size_t rows, std::size_t cols,
                           std::uint64_t seed, const std::string& prefix) {
  Rng rng(seed);
  std::vector<float> m(rows * cols);
  for (float& v : m) v = static_cast<float>(rng.Normal());
  return VectorSet(role, Ids(prefix, rows), cols, std::move(m));
}

inline VectorSet FromRows(Role role, const std::vector<std::vector<float>>& rows,
                          const std::string& prefix) {
  std::vector<float> m;
  for (const auto& r : rows) m.insert(m.end(), r.begin(), r.end());
  return VectorSet(role, Ids(prefix, rows.size()), rows.front().size(),
                   std::move(m));
}

inline VectorSet FromJsonRows(Role role, const Json& rows,
                              const std::string& prefix) {
  std::vector<std::vector<float>> r;
  for (const auto& row : rows) r.push_back(row.get<std::vector<float>>());
  return FromRows(role, r, prefix);
}

// `count` zero-mean, unit-norm, mutually orthogonal vectors of length `dim`
// (Gram-Schmidt against the all-ones direction). Pearson correlation between
// any two of them is 0 and a mix r * u + sqrt(1 - r^2) * w correlates with u
// at exactly r.
inline std::vector<std::vector<double>> OrthonormalCentered(std::size_t count,
                                                            std::size_t dim,
                                                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> basis;
  basis.push_back(std::vector<double>(dim, 1.0 / std::sqrt(double(dim))));
  while (basis.size() < count + 1) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.Normal();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double d = 0;
        for (std::size_t k = 0; k < dim; ++k) d += v[k] * b[k];
        for (std::size_t k = 0; k < dim; ++k) v[k] -= d * b[k];
      }
    }
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    basis.push_back(v);
  }
  basis.erase(basis.begin());
  return basis;
}

inline std::vector<float> ToFloat(const std::vector<double>& v) {
  return std::vector<float>(v.begin(), v.end());
}

inline void WriteBytes(const std::filesystem::path& p,
                       const std::vector<unsigned char>& bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

}  // namespace memaudit::testing

#endif  // MEMAUDIT_TESTS_TEST_UTIL_H_
