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

#include "corpus/generator.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "core/binary_io.h"
#include "core/digest.h"
#include "core/error.h"
#include "core/rng.h"

namespace memaudit::corpus {
namespace {

enum Stream : std::uint64_t {
  kTrainStream = 1,
  kValStream = 2,
  kNovelStream = 3,
  kLayoutStream = 4,
  kAugStream = 5,
};

constexpr std::size_t kMinBlobs = 10;
constexpr std::size_t kMaxBlobs = 20;
constexpr double kMinSigma = 0.03;
constexpr double kMaxSigma = 0.08;

std::string MakeId(const char* prefix, std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_%05zu", prefix, index);
  return buf;
}

std::vector<Sample> Draw(const char* prefix, std::size_t n,
                         const std::vector<std::size_t>& dims,
                         std::uint64_t seed, Stream stream) {
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({MakeId(prefix, i),
                   BlobImage(dims, DeriveSeed(seed, stream, i))});
  }
  return out;
}

}  // namespace

void Validate(const PlantSpec& s) {
  Check(s.dims.size() == 2 || s.dims.size() == 3, ErrorCode::kInvalidArgument,
        "corpus dims must be 2D or 3D");
  for (std::size_t d : s.dims) {
    Check(d >= 16, ErrorCode::kInvalidArgument,
          "corpus dims must be at least 16 per axis");
  }
  Check(s.n_train >= 1, ErrorCode::kInvalidArgument, "need training samples");
  Check(s.n_val >= 1, ErrorCode::kInvalidArgument, "need validation samples");
  Check(s.n_exact_copies + s.n_augmented_copies <= s.n_train,
        ErrorCode::kInvalidArgument,
        "copies must reference distinct training samples "
        "(exact + augmented <= train)");
  Check(s.n_novel_synth + s.n_exact_copies + s.n_augmented_copies >= 1,
        ErrorCode::kInvalidArgument, "need at least one synthetic sample");
}

Json ToJson(const PlantSpec& s) {
  Json j;
  j["n_train"] = s.n_train;
  j["n_val"] = s.n_val;
  j["n_novel_synth"] = s.n_novel_synth;
  j["n_exact_copies"] = s.n_exact_copies;
  j["n_augmented_copies"] = s.n_augmented_copies;
  j["dims"] = s.dims;
  j["seed"] = s.seed;
  return j;
}

PlantSpec PlantSpecFromJson(const Json& j) {
  RejectUnknownKeys(j,
                    {"n_train", "n_val", "n_novel_synth", "n_exact_copies",
                     "n_augmented_copies", "dims", "seed"},
                    "corpus spec");
  PlantSpec s;
  try {
    s.n_train = UnsignedOr(j, "n_train", s.n_train);
    s.n_val = UnsignedOr(j, "n_val", s.n_val);
    s.n_novel_synth = UnsignedOr(j, "n_novel_synth", s.n_novel_synth);
    s.n_exact_copies = UnsignedOr(j, "n_exact_copies", s.n_exact_copies);
    s.n_augmented_copies = UnsignedOr(j, "n_augmented_copies", s.n_augmented_copies);
    s.dims = j.value("dims", s.dims);
    s.seed = UnsignedOr(j, "seed", s.seed);
  } catch (const Json::exception& e) {
    Throw(ErrorCode::kInvalidArgument, std::string("corpus spec: ") + e.what());
  }
  Validate(s);
  return s;
}

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kNovel:
      return "novel";
    case Origin::kExactCopy:
      return "exact_copy";
    case Origin::kAugmentedCopy:
      return "aug_copy";
  }
  return "?";
}

ImageTensor BlobImage(const std::vector<std::size_t>& dims,
                      std::uint64_t seed) {
  Check(dims.size() == 2 || dims.size() == 3, ErrorCode::kInvalidArgument,
        "blob image must be 2D or 3D");
  for (std::size_t d : dims) {
    Check(d >= 16, ErrorCode::kInvalidArgument,
          "blob image needs at least 16 samples per axis");
  }
  Rng rng(seed);
  const bool is3d = dims.size() == 3;
  const std::size_t depth = is3d ? dims[0] : 1;
  const std::size_t rows = dims[is3d ? 1 : 0];
  const std::size_t cols = dims[is3d ? 2 : 1];

  struct Blob {
    double cz, cy, cx;    // centre
    double sz, sy, sx;    // axis lengths (std devs)
    double cos_t, sin_t;  // in-plane orientation
    double amplitude;
  };
  const std::size_t count =
      kMinBlobs +
      static_cast<std::size_t>(rng.Below(kMaxBlobs - kMinBlobs + 1));
  std::vector<Blob> blobs(count);
  for (auto& b : blobs) {
    b.cz = rng.Uniform(0.15, 0.85) * static_cast<double>(depth - 1);
    b.cy = rng.Uniform(0.15, 0.85) * static_cast<double>(rows - 1);
    b.cx = rng.Uniform(0.15, 0.85) * static_cast<double>(cols - 1);
    b.sz = rng.Uniform(kMinSigma, kMaxSigma) * static_cast<double>(depth);
    b.sy = rng.Uniform(kMinSigma, kMaxSigma) * static_cast<double>(rows);
    b.sx = rng.Uniform(kMinSigma, kMaxSigma) * static_cast<double>(cols);
    const double theta = rng.Uniform(0.0, std::numbers::pi);
    b.cos_t = std::cos(theta);
    b.sin_t = std::sin(theta);
    b.amplitude = rng.Uniform(0.3, 1.0);
  }

  ImageTensor img(dims);
  auto v = img.mutable_values();
  for (std::size_t z = 0; z < depth; ++z) {
    for (std::size_t y = 0; y < rows; ++y) {
      for (std::size_t x = 0; x < cols; ++x) {
        double acc = 0.0;
        for (const auto& b : blobs) {
          const double dy = static_cast<double>(y) - b.cy;
          const double dx = static_cast<double>(x) - b.cx;
          const double u = b.cos_t * dy + b.sin_t * dx;
          const double w = -b.sin_t * dy + b.cos_t * dx;
          double e = (u * u) / (b.sy * b.sy) + (w * w) / (b.sx * b.sx);
          if (is3d) {
            const double dz = static_cast<double>(z) - b.cz;
            e += (dz * dz) / (b.sz * b.sz);
          }
          acc += b.amplitude * std::exp(-0.5 * e);
        }
        v[(z * rows + y) * cols + x] = static_cast<float>(acc);
      }
    }
  }
  NormalizeMinMax(img);
  return img;
}

Corpus GenerateCorpus(const PlantSpec& spec, const AugmentationSpec& aug) {
  Validate(spec);
  Validate(aug);
  Corpus corpus;
  corpus.train = Draw("train", spec.n_train, spec.dims, spec.seed, kTrainStream);
  corpus.val = Draw("val", spec.n_val, spec.dims, spec.seed, kValStream);

  struct Pending {
    ImageTensor image;
    Origin origin;
    std::size_t source;
  };
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < spec.n_novel_synth; ++i) {
    pending.push_back({BlobImage(spec.dims, DeriveSeed(spec.seed, kNovelStream, i)),
                       Origin::kNovel, 0});
  }
  Rng layout = Rng(spec.seed).Split(kLayoutStream);
  const auto sources = layout.Permutation(spec.n_train);
  for (std::size_t k = 0; k < spec.n_exact_copies; ++k) {
    pending.push_back(
        {corpus.train[sources[k]].image, Origin::kExactCopy, sources[k]});
  }
  for (std::size_t k = 0; k < spec.n_augmented_copies; ++k) {
    const std::size_t src = sources[spec.n_exact_copies + k];
    ImageTensor img = Augment(corpus.train[src].image, aug,
                              DeriveSeed(spec.seed, kAugStream, k));
    NormalizeMinMax(img);
    pending.push_back({std::move(img), Origin::kAugmentedCopy, src});
  }

  const auto order = layout.Permutation(pending.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    Pending& p = pending[order[j]];
    std::string id = MakeId("synth", j);
    corpus.truth.push_back(
        {id, p.origin,
         p.origin == Origin::kNovel ? "" : corpus.train[p.source].id});
    corpus.synth.push_back({std::move(id), std::move(p.image)});
  }
  return corpus;
}

Json WriteCorpus(const Corpus& corpus, const PlantSpec& spec,
                 const AugmentationSpec& aug,
                 const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  Json manifest;
  manifest["format"] = "memaudit-corpus/1";
  manifest["plant_spec"] = ToJson(spec);
  manifest["augmentation"] = ToJson(aug);
  auto write_group = [&](const char* group, const std::vector<Sample>& samples,
                         const GroundTruth* truth) {
    const fs::path sub = dir / group;
    std::error_code ec;
    fs::create_directories(sub, ec);
    if (ec) Throw(ErrorCode::kIo, "cannot create " + sub.string());
    Json arr = Json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto bytes = EncodeTensor(samples[i].image);
      const std::string rel = std::string(group) + "/" + samples[i].id + ".mimg";
      io::WriteFile(dir / rel, bytes);
      Json entry;
      entry["id"] = samples[i].id;
      entry["file"] = rel;
      entry["sha256"] = Sha256Hex(bytes);
      if (truth != nullptr) {
        entry["origin"] = OriginName((*truth)[i].origin);
        entry["source_train_id"] = (*truth)[i].source_train_id;
      }
      arr.push_back(entry);
    }
    manifest[group] = arr;
  };
  write_group("train", corpus.train, nullptr);
  write_group("val", corpus.val, nullptr);
  write_group("synth", corpus.synth, &corpus.truth);
  WriteJsonFile(manifest, dir / "corpus.json");
  return manifest;
}

GroundTruth TruthFromManifest(const Json& manifest) {
  GroundTruth truth;
  try {
    for (const auto& e : manifest.at("synth")) {
      SynthTruth t;
      t.synth_id = e.at("id").get<std::string>();
      const auto origin = e.at("origin").get<std::string>();
      if (origin == "novel") {
        t.origin = Origin::kNovel;
      } else if (origin == "exact_copy") {
        t.origin = Origin::kExactCopy;
      } else if (origin == "aug_copy") {
        t.origin = Origin::kAugmentedCopy;
      } else {
        Throw(ErrorCode::kFormat, "unknown origin " + origin);
      }
      t.source_train_id = e.value("source_train_id", std::string());
      truth.push_back(std::move(t));
    }
  } catch (const Json::exception& e) {
    Throw(ErrorCode::kFormat, std::string("corpus manifest: ") + e.what());
  }
  return truth;
}

}  // namespace memaudit::corpus
