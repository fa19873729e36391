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

#ifndef MEMAUDIT_REVIEW_PNG_H_
#define MEMAUDIT_REVIEW_PNG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "core/tensor.h"

namespace memaudit::review {

// 8-bit grayscale PNG, no interlace, filter type 0 on every row.
std::string EncodePngGray8(std::span<const std::uint8_t> pixels,
                           std::size_t width, std::size_t height);

// Number of selectable slices: 1 for 2D, depth for 3D.
std::size_t SliceCount(const ImageTensor& img);

// Renders one plane with a linear per-image mapping of [min, max] onto
// [0, 255]. A 2D image rejects any slice; a 3D image defaults to its middle
// slice. Invalid slices raise kInvalidArgument.
std::string RenderPng(const ImageTensor& img, std::optional<std::size_t> slice);

}  // namespace memaudit::review

#endif  // MEMAUDIT_REVIEW_PNG_H_
