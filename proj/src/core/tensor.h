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

#ifndef MEMAUDIT_CORE_TENSOR_H_
#define MEMAUDIT_CORE_TENSOR_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace memaudit {

// 2D ([rows, cols]) or 3D ([depth, rows, cols]) grayscale grid, row-major.
class ImageTensor {
 public:
  ImageTensor() = default;
  // Zero-filled tensor. Throws kInvalidArgument for bad dims.
  explicit ImageTensor(std::vector<std::size_t> dims);
  ImageTensor(std::vector<std::size_t> dims, std::vector<float> values);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t ndim() const { return dims_.size(); }
  std::size_t size() const { return values_.size(); }
  std::span<const float> values() const { return values_; }
  std::span<float> mutable_values() { return values_; }

  float& at(std::size_t r, std::size_t c) { return values_[r * dims_[1] + c]; }
  float at(std::size_t r, std::size_t c) const {
    return values_[r * dims_[1] + c];
  }
  float& at(std::size_t d, std::size_t r, std::size_t c) {
    return values_[(d * dims_[1] + r) * dims_[2] + c];
  }
  float at(std::size_t d, std::size_t r, std::size_t c) const {
    return values_[(d * dims_[1] + r) * dims_[2] + c];
  }

  bool operator==(const ImageTensor&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<float> values_;
};

// Maps values to [0, 1] via (v - min) / (max - min); constant input becomes
// all zeros.
void NormalizeMinMax(ImageTensor& img);

// Reads a MIMG file and min-max normalizes it.
ImageTensor ReadTensor(const std::filesystem::path& path);
// Writes values verbatim (no normalization).
void WriteTensor(const ImageTensor& img, const std::filesystem::path& path);

std::vector<unsigned char> EncodeTensor(const ImageTensor& img);
ImageTensor DecodeTensor(std::span<const unsigned char> bytes);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_TENSOR_H_
