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

#ifndef MEMAUDIT_CORE_VECTOR_SET_H_
#define MEMAUDIT_CORE_VECTOR_SET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace memaudit {

enum class Role : std::uint8_t { kTrain = 0, kVal = 1, kSynth = 2 };

std::string_view RoleName(Role role);
std::optional<Role> ParseRole(std::string_view name);

// Named N x L float matrix tagged with the data split it came from.
// Immutable after construction; all invariants are checked there.
class VectorSet {
 public:
  VectorSet(Role role, std::vector<std::string> ids, std::size_t cols,
            std::vector<float> matrix);

  Role role() const { return role_; }
  std::size_t rows() const { return ids_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::span<const float> matrix() const { return matrix_; }
  std::span<const float> row(std::size_t i) const {
    return std::span(matrix_).subspan(i * cols_, cols_);
  }

  // Same matrix and ids under another role.
  VectorSet WithRole(Role role) const;
  // Rows [0, n).
  VectorSet Head(std::size_t n) const;

  bool operator==(const VectorSet&) const = default;

 private:
  Role role_;
  std::vector<std::string> ids_;
  std::size_t cols_;
  std::vector<float> matrix_;
};

std::vector<unsigned char> EncodeVectorSet(const VectorSet& set);
VectorSet DecodeVectorSet(std::span<const unsigned char> bytes);

// The role stored in the file wins unless `expected` is given, in which case
// a mismatch is an error.
VectorSet ReadVectorSet(const std::filesystem::path& path,
                        std::optional<Role> expected = std::nullopt);
void WriteVectorSet(const VectorSet& set, const std::filesystem::path& path);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_VECTOR_SET_H_
