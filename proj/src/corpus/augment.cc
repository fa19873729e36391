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

#include "corpus/augment.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.h"
#include "core/rng.h"

namespace memaudit::corpus {
namespace {

struct Layout {
  std::size_t depth, rows, cols;
};

Layout LayoutOf(const ImageTensor& img) {
  if (img.ndim() == 2) return {1, img.dims()[0], img.dims()[1]};
  return {img.dims()[0], img.dims()[1], img.dims()[2]};
}

// Normalized 3D index helpers so 2D images are a depth-1 volume with
// axes shifted by one.
std::size_t VolumeAxis(const ImageTensor& img, std::size_t axis) {
  return img.ndim() == 2 ? axis + 1 : axis;
}

}  // namespace

AugmentationSpec AugmentationSpec::Identity() {
  AugmentationSpec s;
  s.flip_prob = {0.0, 0.0, 0.0};
  s.rotation_min_deg = s.rotation_max_deg = 0.0;
  s.contrast_min = s.contrast_max = 1.0;
  s.brightness_min = s.brightness_max = 0.0;
  return s;
}

void Validate(const AugmentationSpec& s) {
  for (double p : s.flip_prob) {
    Check(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidArgument,
          "flip probability must lie in [0, 1]");
  }
  Check(s.rotation_min_deg <= s.rotation_max_deg, ErrorCode::kInvalidArgument,
        "rotation range is not ordered");
  Check(s.contrast_min <= s.contrast_max, ErrorCode::kInvalidArgument,
        "contrast range is not ordered");
  Check(s.contrast_min > 0.0, ErrorCode::kInvalidArgument,
        "contrast scale must be positive");
  Check(s.brightness_min <= s.brightness_max, ErrorCode::kInvalidArgument,
        "brightness range is not ordered");
}

Json ToJson(const AugmentationSpec& s) {
  Json j;
  j["flip_prob"] = s.flip_prob;
  j["rotation_deg"] = {s.rotation_min_deg, s.rotation_max_deg};
  j["contrast_scale"] = {s.contrast_min, s.contrast_max};
  j["brightness_shift"] = {s.brightness_min, s.brightness_max};
  j["seed"] = s.seed;
  return j;
}

AugmentationSpec AugmentationFromJson(const Json& j) {
  RejectUnknownKeys(j,
                    {"flip_prob", "rotation_deg", "contrast_scale",
                     "brightness_shift", "seed"},
                    "augmentation spec");
  AugmentationSpec s;
  try {
    if (j.contains("flip_prob")) {
      s.flip_prob = j.at("flip_prob").get<std::array<double, 3>>();
    }
    if (j.contains("rotation_deg")) {
      s.rotation_min_deg = j.at("rotation_deg").at(0).get<double>();
      s.rotation_max_deg = j.at("rotation_deg").at(1).get<double>();
    }
    if (j.contains("contrast_scale")) {
      s.contrast_min = j.at("contrast_scale").at(0).get<double>();
      s.contrast_max = j.at("contrast_scale").at(1).get<double>();
    }
    if (j.contains("brightness_shift")) {
      s.brightness_min = j.at("brightness_shift").at(0).get<double>();
      s.brightness_max = j.at("brightness_shift").at(1).get<double>();
    }
    s.seed = UnsignedOr(j, "seed", 0);
  } catch (const Json::exception& e) {
    Throw(ErrorCode::kInvalidArgument,
          std::string("augmentation spec: ") + e.what());
  }
  Validate(s);
  return s;
}

ImageTensor Flip(const ImageTensor& img, std::size_t axis) {
  Check(axis < img.ndim(), ErrorCode::kInvalidArgument, "flip axis out of range");
  const Layout l = LayoutOf(img);
  const std::size_t va = VolumeAxis(img, axis);
  ImageTensor out(img.dims());
  const auto src = img.values();
  auto dst = out.mutable_values();
  for (std::size_t z = 0; z < l.depth; ++z) {
    for (std::size_t y = 0; y < l.rows; ++y) {
      for (std::size_t x = 0; x < l.cols; ++x) {
        std::size_t sz = z, sy = y, sx = x;
        if (va == 0) sz = l.depth - 1 - z;
        if (va == 1) sy = l.rows - 1 - y;
        if (va == 2) sx = l.cols - 1 - x;
        dst[(z * l.rows + y) * l.cols + x] =
            src[(sz * l.rows + sy) * l.cols + sx];
      }
    }
  }
  return out;
}

ImageTensor RotatePlane(const ImageTensor& img, std::size_t axis_a,
                        std::size_t axis_b, double degrees) {
  Check(axis_a < img.ndim() && axis_b < img.ndim() && axis_a != axis_b,
        ErrorCode::kInvalidArgument, "rotation axes out of range");
  const Layout l = LayoutOf(img);
  const std::array<std::size_t, 3> extent = {l.depth, l.rows, l.cols};
  const std::size_t a = VolumeAxis(img, axis_a);
  const std::size_t b = VolumeAxis(img, axis_b);
  const std::size_t other = 3 - a - b;
  const double t = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(t), sn = std::sin(t);
  const double ca = (static_cast<double>(extent[a]) - 1.0) / 2.0;
  const double cb = (static_cast<double>(extent[b]) - 1.0) / 2.0;
  const auto src = img.values();
  auto index = [&](std::size_t o, std::size_t pa, std::size_t pb) {
    std::array<std::size_t, 3> p{};
    p[other] = o;
    p[a] = pa;
    p[b] = pb;
    return (p[0] * l.rows + p[1]) * l.cols + p[2];
  };

  ImageTensor out(img.dims());
  auto dst = out.mutable_values();
  for (std::size_t o = 0; o < extent[other]; ++o) {
    for (std::size_t pa = 0; pa < extent[a]; ++pa) {
      for (std::size_t pb = 0; pb < extent[b]; ++pb) {
        const double da = static_cast<double>(pa) - ca;
        const double db = static_cast<double>(pb) - cb;
        const double sa = ca + cs * da + sn * db;
        const double sb = cb - sn * da + cs * db;
        const double fa = std::floor(sa), fb = std::floor(sb);
        const double wa = sa - fa, wb = sb - fb;
        double acc = 0.0;
        for (int ia = 0; ia < 2; ++ia) {
          for (int ib = 0; ib < 2; ++ib) {
            const double qa = fa + ia, qb = fb + ib;
            if (qa < 0 || qb < 0 || qa >= static_cast<double>(extent[a]) ||
                qb >= static_cast<double>(extent[b])) {
              continue;
            }
            const double w = (ia ? wa : 1.0 - wa) * (ib ? wb : 1.0 - wb);
            acc += w * src[index(o, static_cast<std::size_t>(qa),
                                 static_cast<std::size_t>(qb))];
          }
        }
        dst[index(o, pa, pb)] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

ImageTensor Augment(const ImageTensor& img, const AugmentationSpec& spec,
                    std::uint64_t seed) {
  Validate(spec);
  Rng rng(seed);
  ImageTensor out = img;
  for (std::size_t axis = 0; axis < img.ndim(); ++axis) {
    if (rng.Uniform() < spec.flip_prob[axis]) out = Flip(out, axis);
  }
  if (img.ndim() == 2) {
    const double deg = rng.Uniform(spec.rotation_min_deg, spec.rotation_max_deg);
    if (deg != 0.0) out = RotatePlane(out, 0, 1, deg);
  } else {
    static constexpr std::array<std::array<std::size_t, 2>, 3> kPlanes = {
        {{1, 2}, {0, 2}, {0, 1}}};
    for (const auto& plane : kPlanes) {
      const double deg =
          rng.Uniform(spec.rotation_min_deg, spec.rotation_max_deg);
      if (deg != 0.0) out = RotatePlane(out, plane[0], plane[1], deg);
    }
  }
  const double contrast = rng.Uniform(spec.contrast_min, spec.contrast_max);
  const double brightness =
      rng.Uniform(spec.brightness_min, spec.brightness_max);
  if (contrast != 1.0 || brightness != 0.0) {
    for (float& v : out.mutable_values()) {
      v = static_cast<float>(
          std::clamp(contrast * static_cast<double>(v) + brightness, 0.0, 1.0));
    }
  } else {
    for (float& v : out.mutable_values()) v = std::clamp(v, 0.0f, 1.0f);
  }
  return out;
}

}  // namespace memaudit::corpus
