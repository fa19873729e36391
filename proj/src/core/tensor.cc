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

#include "core/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "core/binary_io.h"
#include "core/error.h"

namespace memaudit {
namespace {

constexpr std::string_view kMagic = "MIMG";
constexpr std::uint32_t kVersion = 1;

std::size_t CheckedVolume(const std::vector<std::size_t>& dims) {
  Check(dims.size() == 2 || dims.size() == 3, ErrorCode::kInvalidArgument,
        "tensor must be 2D or 3D");
  std::size_t n = 1;
  for (std::size_t d : dims) {
    Check(d > 0, ErrorCode::kInvalidArgument, "tensor dims must be positive");
    Check(n <= SIZE_MAX / d, ErrorCode::kInvalidArgument, "tensor too large");
    n *= d;
  }
  return n;
}

}  // namespace

ImageTensor::ImageTensor(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), values_(CheckedVolume(dims_), 0.0f) {}

ImageTensor::ImageTensor(std::vector<std::size_t> dims,
                         std::vector<float> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  Check(CheckedVolume(dims_) == values_.size(), ErrorCode::kInvalidArgument,
        "dim/value-count mismatch");
  for (float v : values_) {
    Check(std::isfinite(v), ErrorCode::kInvalidArgument,
          "non-finite tensor value");
  }
}

void NormalizeMinMax(ImageTensor& img) {
  auto v = img.mutable_values();
  if (v.empty()) return;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo;
  const double range = static_cast<double>(*hi) - min;
  if (range <= 0.0) {
    std::fill(v.begin(), v.end(), 0.0f);
    return;
  }
  for (float& x : v) {
    x = static_cast<float>((static_cast<double>(x) - min) / range);
  }
}

std::vector<unsigned char> EncodeTensor(const ImageTensor& img) {
  io::Writer w;
  w.Bytes(kMagic);
  w.U32(kVersion);
  w.U8(static_cast<std::uint8_t>(img.ndim()));
  for (std::size_t d : img.dims()) w.U64(d);
  for (float v : img.values()) w.F32(v);
  return std::move(w.buffer());
}

ImageTensor DecodeTensor(std::span<const unsigned char> bytes) {
  io::Reader r(bytes, "MIMG");
  if (r.remaining() < 4 || r.Bytes(4) != kMagic) {
    Throw(ErrorCode::kFormat, "bad magic");
  }
  if (r.U32() != kVersion) Throw(ErrorCode::kFormat, "unsupported version");
  const std::uint8_t ndim = r.U8();
  if (ndim != 2 && ndim != 3) Throw(ErrorCode::kFormat, "ndim must be 2 or 3");
  std::vector<std::size_t> dims(ndim);
  std::size_t count = 1;
  for (auto& d : dims) {
    const std::uint64_t v = r.U64();
    if (v == 0) Throw(ErrorCode::kFormat, "zero extent");
    if (count > (SIZE_MAX / 4) / v) Throw(ErrorCode::kFormat, "tensor too large");
    d = static_cast<std::size_t>(v);
    count *= d;
  }
  if (r.remaining() != count * 4) {
    Throw(ErrorCode::kFormat, "dim/value-count mismatch");
  }
  std::vector<float> values(count);
  for (auto& v : values) {
    v = r.F32();
    if (!std::isfinite(v)) Throw(ErrorCode::kFormat, "non-finite value");
  }
  return ImageTensor(std::move(dims), std::move(values));
}

ImageTensor ReadTensor(const std::filesystem::path& path) {
  const auto bytes = io::ReadFile(path);
  ImageTensor img;
  try {
    img = DecodeTensor(bytes);
  } catch (const Error& e) {
    Throw(e.code(), path.string() + ": " + e.what());
  }
  NormalizeMinMax(img);
  return img;
}

void WriteTensor(const ImageTensor& img, const std::filesystem::path& path) {
  io::WriteFile(path, EncodeTensor(img));
}

}  // namespace memaudit
