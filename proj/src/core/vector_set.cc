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

#include "core/vector_set.h"

#include <cmath>
#include <unordered_set>

#include "core/binary_io.h"
#include "core/error.h"

namespace memaudit {
namespace {

constexpr std::string_view kMagic = "MEMB";
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kTrain:
      return "train";
    case Role::kVal:
      return "val";
    case Role::kSynth:
      return "synth";
  }
  return "unknown";
}

std::optional<Role> ParseRole(std::string_view name) {
  if (name == "train") return Role::kTrain;
  if (name == "val") return Role::kVal;
  if (name == "synth") return Role::kSynth;
  return std::nullopt;
}

VectorSet::VectorSet(Role role, std::vector<std::string> ids, std::size_t cols,
                     std::vector<float> matrix)
    : role_(role), ids_(std::move(ids)), cols_(cols), matrix_(std::move(matrix)) {
  Check(!ids_.empty(), ErrorCode::kInvalidArgument, "empty vector set");
  Check(cols_ >= 2, ErrorCode::kInvalidArgument,
        "vector length must be at least 2");
  Check(matrix_.size() == ids_.size() * cols_, ErrorCode::kInvalidArgument,
        "id count mismatch");
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids_) {
    Check(!id.empty(), ErrorCode::kInvalidArgument, "empty id");
    Check(id.size() <= UINT16_MAX, ErrorCode::kInvalidArgument, "id too long");
    Check(seen.insert(id).second, ErrorCode::kInvalidArgument,
          "duplicate id: " + id);
  }
  for (float v : matrix_) {
    Check(std::isfinite(v), ErrorCode::kInvalidArgument, "non-finite entry");
  }
}

VectorSet VectorSet::WithRole(Role role) const {
  VectorSet copy = *this;
  copy.role_ = role;
  return copy;
}

VectorSet VectorSet::Head(std::size_t n) const {
  Check(n >= 1 && n <= rows(), ErrorCode::kInvalidArgument,
        "head size out of range");
  return VectorSet(role_, {ids_.begin(), ids_.begin() + n}, cols_,
                   {matrix_.begin(), matrix_.begin() + n * cols_});
}

std::vector<unsigned char> EncodeVectorSet(const VectorSet& set) {
  io::Writer w;
  w.Bytes(kMagic);
  w.U32(kVersion);
  w.U8(static_cast<std::uint8_t>(set.role()));
  w.U64(set.rows());
  w.U64(set.cols());
  for (float v : set.matrix()) w.F32(v);
  for (const auto& id : set.ids()) {
    w.U16(static_cast<std::uint16_t>(id.size()));
    w.Bytes(id);
  }
  return std::move(w.buffer());
}

VectorSet DecodeVectorSet(std::span<const unsigned char> bytes) {
  io::Reader r(bytes, "MEMB");
  if (r.remaining() < 4 || r.Bytes(4) != kMagic) {
    Throw(ErrorCode::kFormat, "bad magic");
  }
  if (r.U32() != kVersion) Throw(ErrorCode::kFormat, "unsupported version");
  const std::uint8_t role = r.U8();
  if (role > 2) Throw(ErrorCode::kFormat, "bad role tag");
  const std::uint64_t n = r.U64();
  const std::uint64_t l = r.U64();
  if (n == 0) Throw(ErrorCode::kFormat, "empty vector set");
  if (l < 2) Throw(ErrorCode::kFormat, "vector length must be at least 2");
  if (n > r.remaining() / 4 / l) Throw(ErrorCode::kFormat, "truncated matrix");
  std::vector<float> matrix(n * l);
  for (auto& v : matrix) {
    v = r.F32();
    if (!std::isfinite(v)) Throw(ErrorCode::kFormat, "non-finite entry");
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  while (r.remaining() > 0) {
    const std::uint16_t len = r.U16();
    ids.emplace_back(r.Bytes(len));
  }
  if (ids.size() != n) Throw(ErrorCode::kFormat, "id count mismatch");
  try {
    return VectorSet(static_cast<Role>(role), std::move(ids), l,
                     std::move(matrix));
  } catch (const Error& e) {
    Throw(ErrorCode::kFormat, e.what());
  }
}

VectorSet ReadVectorSet(const std::filesystem::path& path,
                        std::optional<Role> expected) {
  const auto bytes = io::ReadFile(path);
  try {
    VectorSet set = DecodeVectorSet(bytes);
    if (expected && set.role() != *expected) {
      Throw(ErrorCode::kFormat,
            "role mismatch: file has " + std::string(RoleName(set.role())) +
                ", expected " + std::string(RoleName(*expected)));
    }
    return set;
  } catch (const Error& e) {
    Throw(e.code(), path.string() + ": " + e.what());
  }
}

void WriteVectorSet(const VectorSet& set, const std::filesystem::path& path) {
  io::WriteFile(path, EncodeVectorSet(set));
}

}  // namespace memaudit
