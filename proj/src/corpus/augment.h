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

#ifndef MEMAUDIT_CORPUS_AUGMENT_H_
#define MEMAUDIT_CORPUS_AUGMENT_H_

#include <array>
#include <cstdint>

#include "core/json.h"
#include "core/tensor.h"

namespace memaudit::corpus {

struct AugmentationSpec {
  // Probability of flipping each axis (first ndim entries are used).
  std::array<double, 3> flip_prob = {0.5, 0.5, 0.5};
  // Uniform rotation angle range in degrees, per rotation plane.
  double rotation_min_deg = -5.0;
  double rotation_max_deg = 5.0;
  double contrast_min = 0.9;
  double contrast_max = 1.1;
  double brightness_min = -0.05;
  double brightness_max = 0.05;
  // Base seed for callers that derive per-sample augmentation seeds.
  std::uint64_t seed = 0;

  static AugmentationSpec Identity();
};

void Validate(const AugmentationSpec& spec);
Json ToJson(const AugmentationSpec& spec);
AugmentationSpec AugmentationFromJson(const Json& j);

// Rotates the plane spanned by axes (axis_a, axis_b) about its centre by
// `degrees`, for every index of the remaining axis. Bilinear resampling;
// samples outside the frame read as 0. Output pixel p takes its value from
//   src_a = c_a + cos(t) (p_a - c_a) + sin(t) (p_b - c_b)
//   src_b = c_b - sin(t) (p_a - c_a) + cos(t) (p_b - c_b)
// with c the plane centre ((n - 1) / 2).
ImageTensor RotatePlane(const ImageTensor& img, std::size_t axis_a,
                        std::size_t axis_b, double degrees);

ImageTensor Flip(const ImageTensor& img, std::size_t axis);

// Seeded flips per axis, then rotation (one plane for 2D; planes (1,2),
// (0,2), (0,1) in turn for 3D), then clamp(contrast * x + brightness, 0, 1).
// Every random quantity is drawn regardless of the spec, so streams stay
// aligned across specs.
ImageTensor Augment(const ImageTensor& img, const AugmentationSpec& spec,
                    std::uint64_t seed);

}  // namespace memaudit::corpus

#endif  // MEMAUDIT_CORPUS_AUGMENT_H_
