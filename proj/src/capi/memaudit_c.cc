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

#include "memaudit/memaudit.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "contrastive/encoder.h"
#include "contrastive/trainer.h"
#include "core/binary_io.h"
#include "core/digest.h"
#include "core/error.h"
#include "core/json.h"
#include "core/labels.h"
#include "core/parallel.h"
#include "core/tensor.h"
#include "core/vector_set.h"
#include "corpus/augment.h"
#include "corpus/generator.h"
#include "corpus/scoring.h"
#include "detection/detection.h"
#include "metrics/classification.h"
#include "metrics/fid.h"
#include "metrics/ms_ssim.h"
#include "pipeline/pipeline.h"
#include "review/server.h"
#include "review/session.h"

#ifndef MEMAUDIT_VERSION
#define MEMAUDIT_VERSION "0.0.0"
#endif

using namespace memaudit;

struct ma_vector_set {
  VectorSet set;
};
struct ma_image {
  ImageTensor image;
};
struct ma_image_set {
  std::vector<corpus::Sample> samples;
};
struct ma_encoder {
  contrastive::EncoderModel model;
};
struct ma_threshold {
  detection::Threshold threshold;
};
struct ma_report {
  detection::AuditReport report;
};
struct ma_review_server {
  std::shared_ptr<review::ReviewSession> session;
  std::unique_ptr<review::ReviewServer> server;
};

namespace {

thread_local std::string g_last_error;

ma_status Fail(ma_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
ma_status Call(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return MA_OK;
  } catch (const Error& e) {
    return Fail(static_cast<ma_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(MA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(MA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(MA_ERR_INTERNAL, e.what());
  }
}

void Need(const void* p, const char* what) {
  Check(p != nullptr, ErrorCode::kInvalidArgument,
        std::string(what) + " must not be NULL");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void SetString(char** out, const std::string& s) {
  if (out != nullptr) *out = Dup(s);
}

Json ParseConfig(const char* json) {
  if (json == nullptr || *json == '\0') return Json::object();
  try {
    return Json::parse(json);
  } catch (const Json::parse_error& e) {
    Throw(ErrorCode::kInvalidArgument, std::string("bad JSON: ") + e.what());
  }
}

Role ToRole(ma_role role) {
  Check(role >= MA_ROLE_TRAIN && role <= MA_ROLE_SYNTH,
        ErrorCode::kInvalidArgument, "bad role");
  return static_cast<Role>(role);
}

std::map<metrics::PairKey, bool> Predictions(
    const detection::AuditReport& r) {
  std::map<metrics::PairKey, bool> out;
  for (const auto& m : r.nearest) {
    out[{m.train_id, m.synth_id}] =
        static_cast<double>(m.rho) >= r.tau.tau;
  }
  for (const auto& m : r.copies) out[{m.train_id, m.synth_id}] = true;
  return out;
}

std::map<metrics::PairKey, float> PairRho(const detection::AuditReport& r) {
  std::map<metrics::PairKey, float> out;
  for (const auto& m : r.nearest) out[{m.train_id, m.synth_id}] = m.rho;
  for (const auto& m : r.copies) out[{m.train_id, m.synth_id}] = m.rho;
  return out;
}

}  // namespace

extern "C" {

const char* ma_version(void) { return MEMAUDIT_VERSION; }

const char* ma_last_error(void) { return g_last_error.c_str(); }

const char* ma_status_name(ma_status status) {
  switch (status) {
    case MA_OK:
      return "ok";
    case MA_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case MA_ERR_IO:
      return "io";
    case MA_ERR_NUMERICAL:
      return "numerical";
    case MA_ERR_FORMAT:
      return "format";
    case MA_ERR_NOT_FOUND:
      return "not_found";
    case MA_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void ma_string_free(char* s) { std::free(s); }

ma_status ma_set_threads(int threads) {
  return Call([&] {
    Check(threads >= 0, ErrorCode::kInvalidArgument,
          "thread count must be >= 0");
    SetDefaultThreads(static_cast<std::size_t>(threads));
  });
}

int ma_get_threads(void) { return static_cast<int>(DefaultThreads()); }

ma_status ma_file_sha256(const char* path, char** hex_out) {
  return Call([&] {
    Need(path, "path");
    Need(hex_out, "hex_out");
    *hex_out = Dup(FileSha256Hex(path));
  });
}

ma_status ma_json_digest(const char* json, char** hex_out) {
  return Call([&] {
    Need(json, "json");
    Need(hex_out, "hex_out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      Throw(ErrorCode::kInvalidArgument, std::string("bad JSON: ") + e.what());
    }
    *hex_out = Dup(Sha256Hex(doc.dump()));
  });
}

ma_status ma_write_file(const char* path, const char* data, size_t size) {
  return Call([&] {
    Need(path, "path");
    Check(data != nullptr || size == 0, ErrorCode::kInvalidArgument,
          "data must not be NULL");
    const auto* p = reinterpret_cast<const unsigned char*>(data);
    io::WriteFile(path, std::span<const unsigned char>(p, size));
  });
}

// ---- vector sets

ma_status ma_vector_set_create(ma_role role, const char* const* ids,
                               size_t rows, size_t cols, const float* data,
                               ma_vector_set** out) {
  return Call([&] {
    Need(ids, "ids");
    Need(data, "data");
    Need(out, "out");
    std::vector<std::string> names;
    for (size_t i = 0; i < rows; ++i) {
      Need(ids[i], "id");
      names.emplace_back(ids[i]);
    }
    std::vector<float> m(data, data + rows * cols);
    *out = new ma_vector_set{
        VectorSet(ToRole(role), std::move(names), cols, std::move(m))};
  });
}

ma_status ma_vector_set_read(const char* path, ma_role expected,
                             ma_vector_set** out) {
  return Call([&] {
    Need(path, "path");
    Need(out, "out");
    std::optional<Role> role;
    if (expected != MA_ROLE_ANY) role = ToRole(expected);
    *out = new ma_vector_set{ReadVectorSet(path, role)};
  });
}

ma_status ma_vector_set_write(const ma_vector_set* set, const char* path) {
  return Call([&] {
    Need(set, "set");
    Need(path, "path");
    WriteVectorSet(set->set, path);
  });
}

ma_status ma_vector_set_with_role(const ma_vector_set* set, ma_role role,
                                  ma_vector_set** out) {
  return Call([&] {
    Need(set, "set");
    Need(out, "out");
    *out = new ma_vector_set{set->set.WithRole(ToRole(role))};
  });
}

size_t ma_vector_set_rows(const ma_vector_set* set) {
  return set ? set->set.rows() : 0;
}

size_t ma_vector_set_cols(const ma_vector_set* set) {
  return set ? set->set.cols() : 0;
}

ma_role ma_vector_set_role(const ma_vector_set* set) {
  return set ? static_cast<ma_role>(set->set.role()) : MA_ROLE_ANY;
}

const char* ma_vector_set_id(const ma_vector_set* set, size_t i) {
  if (set == nullptr || i >= set->set.rows()) return nullptr;
  return set->set.ids()[i].c_str();
}

const float* ma_vector_set_data(const ma_vector_set* set) {
  return set ? set->set.matrix().data() : nullptr;
}

ma_status ma_vector_set_digest(const ma_vector_set* set, char** hex_out) {
  return Call([&] {
    Need(set, "set");
    Need(hex_out, "hex_out");
    *hex_out = Dup(detection::VectorSetDigest(set->set));
  });
}

void ma_vector_set_free(ma_vector_set* set) { delete set; }

// ---- images

ma_status ma_image_create(const size_t* dims, size_t ndim,
                          const float* values, ma_image** out) {
  return Call([&] {
    Need(dims, "dims");
    Need(values, "values");
    Need(out, "out");
    std::vector<std::size_t> d(dims, dims + ndim);
    std::size_t n = 1;
    for (auto x : d) n *= x;
    *out = new ma_image{ImageTensor(d, std::vector<float>(values, values + n))};
  });
}

ma_status ma_image_read(const char* path, ma_image** out) {
  return Call([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new ma_image{ReadTensor(path)};
  });
}

ma_status ma_image_write(const ma_image* image, const char* path) {
  return Call([&] {
    Need(image, "image");
    Need(path, "path");
    WriteTensor(image->image, path);
  });
}

size_t ma_image_ndim(const ma_image* image) {
  return image ? image->image.ndim() : 0;
}

size_t ma_image_dim(const ma_image* image, size_t axis) {
  if (image == nullptr || axis >= image->image.ndim()) return 0;
  return image->image.dims()[axis];
}

const float* ma_image_data(const ma_image* image) {
  return image ? image->image.values().data() : nullptr;
}

void ma_image_free(ma_image* image) { delete image; }

ma_status ma_image_set_read_dir(const char* dir, ma_image_set** out) {
  return Call([&] {
    Need(dir, "dir");
    Need(out, "out");
    *out = new ma_image_set{pipeline::LoadImageDir(dir)};
  });
}

size_t ma_image_set_size(const ma_image_set* set) {
  return set ? set->samples.size() : 0;
}

const char* ma_image_set_id(const ma_image_set* set, size_t i) {
  if (set == nullptr || i >= set->samples.size()) return nullptr;
  return set->samples[i].id.c_str();
}

void ma_image_set_free(ma_image_set* set) { delete set; }

// ---- corpus

ma_status ma_corpus_generate(const char* spec_json,
                             const char* augmentation_json,
                             const char* out_dir, char** manifest_out) {
  return Call([&] {
    Need(out_dir, "out_dir");
    const auto spec = corpus::PlantSpecFromJson(ParseConfig(spec_json));
    const auto aug =
        corpus::AugmentationFromJson(ParseConfig(augmentation_json));
    const auto c = corpus::GenerateCorpus(spec, aug);
    const Json manifest = corpus::WriteCorpus(c, spec, aug, out_dir);
    SetString(manifest_out, DumpJson(manifest));
  });
}

ma_status ma_corpus_spec_resolve(const char* spec_json, char** out) {
  return Call([&] {
    Need(out, "out");
    *out = Dup(DumpJson(
        corpus::ToJson(corpus::PlantSpecFromJson(ParseConfig(spec_json)))));
  });
}

ma_status ma_augmentation_resolve(const char* augmentation_json, char** out) {
  return Call([&] {
    Need(out, "out");
    *out = Dup(DumpJson(corpus::ToJson(
        corpus::AugmentationFromJson(ParseConfig(augmentation_json)))));
  });
}

ma_status ma_train_config_resolve(const char* config_json, char** out) {
  return Call([&] {
    Need(out, "out");
    *out = Dup(DumpJson(contrastive::ToJson(
        contrastive::TrainConfigFromJson(ParseConfig(config_json)))));
  });
}

// ---- encoder

ma_status ma_encoder_train(const ma_image_set* images, const char* config_json,
                           const char* augmentation_json,
                           const char* grid_json, ma_encoder** out,
                           char** loss_trace_out) {
  return Call([&] {
    Need(images, "images");
    Need(out, "out");
    const auto cfg = contrastive::TrainConfigFromJson(ParseConfig(config_json));
    const auto aug =
        corpus::AugmentationFromJson(ParseConfig(augmentation_json));
    const auto& first = images->samples.front().image;
    for (const auto& s : images->samples) {
      Check(s.image.dims() == first.dims(), ErrorCode::kInvalidArgument,
            "training images differ in shape (" + s.id + ")");
    }
    std::vector<std::size_t> grid = pipeline::DefaultPoolGrid(first.dims());
    if (grid_json != nullptr && *grid_json != '\0') {
      grid = ParseConfig(grid_json).get<std::vector<std::size_t>>();
    }
    auto result = pipeline::TrainOnImages(images->samples, grid, cfg, aug);
    SetString(loss_trace_out, Json(result.loss_trace).dump());
    *out = new ma_encoder{std::move(result.model)};
  });
}

ma_status ma_encoder_read(const char* path, ma_encoder** out) {
  return Call([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new ma_encoder{contrastive::ReadModel(path)};
  });
}

ma_status ma_encoder_write(const ma_encoder* encoder, const char* path) {
  return Call([&] {
    Need(encoder, "encoder");
    Need(path, "path");
    contrastive::WriteModel(encoder->model, path);
  });
}

ma_status ma_encoder_info(const ma_encoder* encoder, char** json_out) {
  return Call([&] {
    Need(encoder, "encoder");
    Need(json_out, "json_out");
    const auto& m = encoder->model;
    Json j;
    j["layer_dims"] = m.layer_dims();
    j["activation"] = "tanh";
    j["tau_temp"] = m.tau_temp();
    j["seed"] = m.seed();
    j["pool_grid"] = m.pool_grid();
    j["param_count"] = m.params().size();
    *json_out = Dup(DumpJson(j));
  });
}

ma_status ma_encoder_embed(const ma_encoder* encoder,
                           const ma_image_set* images, ma_role role,
                           ma_vector_set** out) {
  return Call([&] {
    Need(encoder, "encoder");
    Need(images, "images");
    Need(out, "out");
    *out = new ma_vector_set{
        pipeline::EmbedImages(encoder->model, images->samples, ToRole(role))};
  });
}

void ma_encoder_free(ma_encoder* encoder) { delete encoder; }

// ---- detection

ma_status ma_calibrate(const ma_vector_set* train, const ma_vector_set* val,
                       double u, ma_threshold** out) {
  return Call([&] {
    Need(train, "train");
    Need(val, "val");
    Need(out, "out");
    *out = new ma_threshold{
        detection::CalibrateThreshold(train->set, val->set, u)};
  });
}

double ma_threshold_value(const ma_threshold* threshold) {
  return threshold ? threshold->threshold.tau : 0.0;
}

void ma_threshold_free(ma_threshold* threshold) { delete threshold; }

ma_status ma_audit(const ma_vector_set* train, const ma_vector_set* synth,
                   const ma_threshold* threshold, ma_report** out) {
  return Call([&] {
    Need(train, "train");
    Need(synth, "synth");
    Need(threshold, "threshold");
    Need(out, "out");
    *out = new ma_report{
        detection::Audit(train->set, synth->set, threshold->threshold)};
  });
}

ma_status ma_null_audit(const ma_vector_set* holdout,
                        const ma_vector_set* synth,
                        const ma_threshold* threshold, ma_report** out) {
  return Call([&] {
    Need(holdout, "holdout");
    Need(synth, "synth");
    Need(threshold, "threshold");
    Need(out, "out");
    *out = new ma_report{
        detection::NullAudit(holdout->set, synth->set, threshold->threshold)};
  });
}

ma_status ma_report_counts_get(const ma_report* report,
                               ma_report_counts* out) {
  return Call([&] {
    Need(report, "report");
    Need(out, "out");
    const auto& r = report->report;
    *out = {r.tau.tau,  r.tau.percentile_u, r.n_train,
            r.n_val,    r.n_synth,          r.n_mem,
            r.n_copies, r.pct_mem,          r.pct_copies};
  });
}

ma_status ma_report_read(const char* path, ma_report** out) {
  return Call([&] {
    Need(path, "path");
    Need(out, "out");
    *out = new ma_report{detection::ReportFromJson(ReadJsonFile(path))};
  });
}

ma_status ma_report_write(const ma_report* report, const char* path) {
  return Call([&] {
    Need(report, "report");
    Need(path, "path");
    WriteJsonFile(detection::ToJson(report->report), path);
  });
}

ma_status ma_report_to_json(const ma_report* report, char** json_out) {
  return Call([&] {
    Need(report, "report");
    Need(json_out, "json_out");
    *json_out = Dup(DumpJson(detection::ToJson(report->report)));
  });
}

void ma_report_free(ma_report* report) { delete report; }

ma_status ma_memorization_curve(const ma_vector_set* train,
                                const ma_vector_set* val, double u,
                                const ma_vector_set* const* checkpoints,
                                const char* const* labels,
                                size_t n_checkpoints, char** json_out) {
  return Call([&] {
    Need(train, "train");
    Need(val, "val");
    Need(json_out, "json_out");
    Check(n_checkpoints == 0 || (checkpoints != nullptr && labels != nullptr),
          ErrorCode::kInvalidArgument, "checkpoints and labels required");
    std::vector<detection::Checkpoint> cps;
    for (size_t i = 0; i < n_checkpoints; ++i) {
      Need(checkpoints[i], "checkpoint");
      Need(labels[i], "label");
      cps.push_back({labels[i], checkpoints[i]->set});
    }
    const auto curve =
        detection::ComputeMemorizationCurve(train->set, cps, u, val->set);
    *json_out = Dup(DumpJson(detection::ToJson(curve)));
  });
}

// ---- labels and classification

ma_status ma_confusion(const char* labels_path, const ma_report* report,
                       char** json_out) {
  return Call([&] {
    Need(labels_path, "labels_path");
    Need(report, "report");
    Need(json_out, "json_out");
    const auto s = metrics::Confusion(ReadLabels(labels_path),
                                      Predictions(report->report));
    *json_out = Dup(DumpJson(metrics::ToJson(s)));
  });
}

ma_status ma_roc(const char* labels_path, const ma_report* report,
                 const double* u_grid, size_t n_u, char** json_out,
                 char** csv_out) {
  return Call([&] {
    Need(labels_path, "labels_path");
    Need(report, "report");
    Need(u_grid, "u_grid");
    const auto& r = report->report;
    Check(!r.tau.calibration_values.empty(), ErrorCode::kInvalidArgument,
          "report carries no calibration values (rho_nn_val)");
    const auto roc =
        metrics::Roc(ReadLabels(labels_path), PairRho(r),
                     std::vector<double>(u_grid, u_grid + n_u),
                     r.tau.calibration_values);
    SetString(json_out, DumpJson(metrics::ToJson(roc)));
    SetString(csv_out, metrics::ToCsv(roc));
  });
}

ma_status ma_score_planted(const char* corpus_manifest_path,
                           const ma_report* report, char** json_out) {
  return Call([&] {
    Need(corpus_manifest_path, "corpus_manifest_path");
    Need(report, "report");
    Need(json_out, "json_out");
    const auto truth =
        corpus::TruthFromManifest(ReadJsonFile(corpus_manifest_path));
    *json_out = Dup(
        DumpJson(corpus::ToJson(corpus::ScoreDetector(truth, report->report))));
  });
}

// ---- quality and diversity

ma_status ma_fid(const ma_vector_set* a, const ma_vector_set* b,
                 double* out) {
  return Call([&] {
    Need(a, "a");
    Need(b, "b");
    Need(out, "out");
    *out = metrics::FrechetDistance(metrics::SummarizeGaussian(a->set),
                                    metrics::SummarizeGaussian(b->set));
  });
}

ma_status ma_ms_ssim(const ma_image* a, const ma_image* b, int scales,
                     double* out) {
  return Call([&] {
    Need(a, "a");
    Need(b, "b");
    Need(out, "out");
    *out = metrics::MsSsim(a->image, b->image, scales);
  });
}

ma_status ma_diversity(const ma_image_set* images, uint64_t seed, int scales,
                       double* out) {
  return Call([&] {
    Need(images, "images");
    Need(out, "out");
    std::vector<ImageTensor> tensors;
    for (const auto& s : images->samples) tensors.push_back(s.image);
    *out = metrics::DiversityMsSsim(tensors, seed, scales);
  });
}

// ---- review

ma_status ma_review_start(const ma_review_options* options,
                          ma_review_server** out) {
  return Call([&] {
    Need(options, "options");
    Need(options->report_path, "report_path");
    Need(options->labels_path, "labels_path");
    Need(out, "out");
    review::SessionOptions so;
    so.report_path = options->report_path;
    so.labels_path = options->labels_path;
    for (size_t i = 0; i < options->n_image_dirs; ++i) {
      Need(options->image_dirs[i], "image dir");
      so.image_dirs.emplace_back(options->image_dirs[i]);
    }
    if (options->sample_n >= 0) {
      so.sample_n = static_cast<std::size_t>(options->sample_n);
    }
    so.sample_seed = options->sample_seed;
    review::ServerOptions srv;
    if (options->host != nullptr) srv.host = options->host;
    srv.port = options->port;
    if (options->ui_dir != nullptr) srv.ui_dir = options->ui_dir;
    auto handle = std::make_unique<ma_review_server>();
    handle->session = review::ReviewSession::Open(std::move(so));
    handle->server =
        std::make_unique<review::ReviewServer>(handle->session, srv);
    handle->server->Start();
    *out = handle.release();
  });
}

int ma_review_port(const ma_review_server* server) {
  return server ? server->server->port() : -1;
}

void ma_review_stop(ma_review_server* server) {
  if (server == nullptr) return;
  server->server->Stop();
  delete server;
}

ma_status ma_sample_indices(size_t total, size_t n, uint64_t seed,
                            size_t* out) {
  return Call([&] {
    Check(n == 0 || out != nullptr, ErrorCode::kInvalidArgument,
          "out must not be NULL");
    const auto idx = review::SampleIndices(total, n, seed);
    std::copy(idx.begin(), idx.end(), out);
  });
}

}  // extern "C"
