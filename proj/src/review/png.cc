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

#include "review/png.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/error.h"

namespace memaudit::review {
namespace {

void PutU32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v >> 24));
  out.push_back(static_cast<char>(v >> 16));
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

void PutChunk(std::string& out, const char type[4], const std::string& data) {
  PutU32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.append(type, 4);
  out += data;
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(out.data() + start),
              static_cast<uInt>(out.size() - start));
  PutU32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::string EncodePngGray8(std::span<const std::uint8_t> pixels,
                           std::size_t width, std::size_t height) {
  Check(width > 0 && height > 0 && pixels.size() == width * height,
        ErrorCode::kInvalidArgument, "pixel count does not match PNG size");
  std::string raw;
  raw.reserve(height * (width + 1));
  for (std::size_t r = 0; r < height; ++r) {
    raw.push_back(0);
    raw.append(reinterpret_cast<const char*>(pixels.data() + r * width), width);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string packed(bound, '\0');
  const int rc = compress2(reinterpret_cast<Bytef*>(packed.data()), &bound,
                           reinterpret_cast<const Bytef*>(raw.data()),
                           static_cast<uLong>(raw.size()), 6);
  Check(rc == Z_OK, ErrorCode::kIo, "zlib compression failed");
  packed.resize(bound);

  std::string ihdr;
  PutU32(ihdr, static_cast<std::uint32_t>(width));
  PutU32(ihdr, static_cast<std::uint32_t>(height));
  ihdr += std::string("\x08\x00\x00\x00\x00", 5);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  PutChunk(out, "IHDR", ihdr);
  PutChunk(out, "IDAT", packed);
  PutChunk(out, "IEND", "");
  return out;
}

std::size_t SliceCount(const ImageTensor& img) {
  return img.ndim() == 3 ? img.dims()[0] : 1;
}

std::string RenderPng(const ImageTensor& img,
                      std::optional<std::size_t> slice) {
  Check(img.ndim() == 2 || img.ndim() == 3, ErrorCode::kInvalidArgument,
        "image must be 2D or 3D");
  std::size_t plane = 0;
  if (img.ndim() == 2) {
    Check(!slice.has_value(), ErrorCode::kInvalidArgument,
          "slice given for a 2D image");
  } else {
    plane = slice.value_or(img.dims()[0] / 2);
    Check(plane < img.dims()[0], ErrorCode::kInvalidArgument,
          "slice " + std::to_string(plane) + " out of range [0, " +
              std::to_string(img.dims()[0]) + ")");
  }
  const std::size_t rows = img.dims()[img.ndim() - 2];
  const std::size_t cols = img.dims()[img.ndim() - 1];
  const auto values = img.values();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double span = static_cast<double>(*hi_it) - lo;
  std::vector<std::uint8_t> pixels(rows * cols);
  const float* src = values.data() + plane * rows * cols;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const double t = span > 0.0 ? (src[i] - lo) / span : 0.0;
    pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
  }
  return EncodePngGray8(pixels, cols, rows);
}

}  // namespace memaudit::review
