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

/* Public C interface of the memaudit toolkit.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns ma_status; on failure
 * ma_last_error() describes the cause for the calling thread. Strings
 * returned through char** out-parameters are heap copies released with
 * ma_string_free. Configuration objects are passed as JSON text; NULL or ""
 * selects the defaults. */
#ifndef MEMAUDIT_MEMAUDIT_H_
#define MEMAUDIT_MEMAUDIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MEMAUDIT_BUILDING_LIBRARY)
#define MA_API __attribute__((visibility("default")))
#else
#define MA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ma_status {
  MA_OK = 0,
  MA_ERR_INVALID_ARGUMENT = 2,
  MA_ERR_IO = 3,
  MA_ERR_NUMERICAL = 4,
  MA_ERR_FORMAT = 5,
  MA_ERR_NOT_FOUND = 6,
  MA_ERR_INTERNAL = 7
} ma_status;

typedef enum ma_role {
  MA_ROLE_ANY = -1,
  MA_ROLE_TRAIN = 0,
  MA_ROLE_VAL = 1,
  MA_ROLE_SYNTH = 2
} ma_role;

typedef struct ma_vector_set ma_vector_set;
typedef struct ma_image ma_image;
typedef struct ma_image_set ma_image_set;
typedef struct ma_encoder ma_encoder;
typedef struct ma_threshold ma_threshold;
typedef struct ma_report ma_report;
typedef struct ma_review_server ma_review_server;

/* ---- library ---------------------------------------------------------- */

MA_API const char* ma_version(void);
/* Message of the last failure on this thread; "" if none. */
MA_API const char* ma_last_error(void);
MA_API const char* ma_status_name(ma_status status);
MA_API void ma_string_free(char* s);
/* Worker cap for parallel kernels. 0 restores the default
 * (MEMAUDIT_THREADS, else hardware concurrency). Results do not depend on
 * the value. */
MA_API ma_status ma_set_threads(int threads);
MA_API int ma_get_threads(void);

/* SHA-256 of a file as lowercase hex. */
MA_API ma_status ma_file_sha256(const char* path, char** hex_out);
/* SHA-256 over the canonical (key-sorted) form of a JSON document. */
MA_API ma_status ma_json_digest(const char* json, char** hex_out);
/* Writes via a temporary file and rename. */
MA_API ma_status ma_write_file(const char* path, const char* data,
                               size_t size);

/* ---- vector sets (MEMB) ------------------------------------------------ */

MA_API ma_status ma_vector_set_create(ma_role role, const char* const* ids,
                                      size_t rows, size_t cols,
                                      const float* data, ma_vector_set** out);
/* expected == MA_ROLE_ANY accepts whatever role the file stores. */
MA_API ma_status ma_vector_set_read(const char* path, ma_role expected,
                                    ma_vector_set** out);
MA_API ma_status ma_vector_set_write(const ma_vector_set* set,
                                     const char* path);
MA_API ma_status ma_vector_set_with_role(const ma_vector_set* set,
                                         ma_role role, ma_vector_set** out);
MA_API size_t ma_vector_set_rows(const ma_vector_set* set);
MA_API size_t ma_vector_set_cols(const ma_vector_set* set);
MA_API ma_role ma_vector_set_role(const ma_vector_set* set);
/* Borrowed; valid while the set lives. NULL if i is out of range. */
MA_API const char* ma_vector_set_id(const ma_vector_set* set, size_t i);
MA_API const float* ma_vector_set_data(const ma_vector_set* set);
MA_API ma_status ma_vector_set_digest(const ma_vector_set* set,
                                      char** hex_out);
MA_API void ma_vector_set_free(ma_vector_set* set);

/* ---- images (MIMG) ----------------------------------------------------- */

MA_API ma_status ma_image_create(const size_t* dims, size_t ndim,
                                 const float* values, ma_image** out);
/* Loads and min-max normalizes. */
MA_API ma_status ma_image_read(const char* path, ma_image** out);
MA_API ma_status ma_image_write(const ma_image* image, const char* path);
MA_API size_t ma_image_ndim(const ma_image* image);
MA_API size_t ma_image_dim(const ma_image* image, size_t axis);
MA_API const float* ma_image_data(const ma_image* image);
MA_API void ma_image_free(ma_image* image);

/* Every *.mimg in a directory, sorted by name; ids are file stems. */
MA_API ma_status ma_image_set_read_dir(const char* dir, ma_image_set** out);
MA_API size_t ma_image_set_size(const ma_image_set* set);
MA_API const char* ma_image_set_id(const ma_image_set* set, size_t i);
MA_API void ma_image_set_free(ma_image_set* set);

/* ---- planted corpus ---------------------------------------------------- */

/* Writes <out_dir>/{train,val,synth}/<id>.mimg and corpus.json. Returns the
 * corpus.json text. */
MA_API ma_status ma_corpus_generate(const char* spec_json,
                                    const char* augmentation_json,
                                    const char* out_dir, char** manifest_out);
/* Resolved spec / augmentation / train config with defaults filled in. */
MA_API ma_status ma_corpus_spec_resolve(const char* spec_json, char** out);
MA_API ma_status ma_augmentation_resolve(const char* augmentation_json,
                                         char** out);
MA_API ma_status ma_train_config_resolve(const char* config_json,
                                         char** out);

/* ---- contrastive encoder ----------------------------------------------- */

/* Trains on pooled features of `images` with augmented views. grid_json is
 * a JSON array of cells per axis, NULL for the default grid. The per-epoch
 * loss trace is returned as a JSON array when loss_trace_out is not NULL. */
MA_API ma_status ma_encoder_train(const ma_image_set* images,
                                  const char* config_json,
                                  const char* augmentation_json,
                                  const char* grid_json, ma_encoder** out,
                                  char** loss_trace_out);
MA_API ma_status ma_encoder_read(const char* path, ma_encoder** out);
MA_API ma_status ma_encoder_write(const ma_encoder* encoder,
                                  const char* path);
/* Header fields (layer_dims, tau_temp, seed, pool_grid, ...) as JSON. */
MA_API ma_status ma_encoder_info(const ma_encoder* encoder, char** json_out);
MA_API ma_status ma_encoder_embed(const ma_encoder* encoder,
                                  const ma_image_set* images, ma_role role,
                                  ma_vector_set** out);
MA_API void ma_encoder_free(ma_encoder* encoder);

/* ---- detection --------------------------------------------------------- */

/* tau = u-th percentile (0 < u < 100) of every training row's nearest
 * validation correlation. */
MA_API ma_status ma_calibrate(const ma_vector_set* train,
                              const ma_vector_set* val, double u,
                              ma_threshold** out);
MA_API double ma_threshold_value(const ma_threshold* threshold);
MA_API void ma_threshold_free(ma_threshold* threshold);

MA_API ma_status ma_audit(const ma_vector_set* train,
                          const ma_vector_set* synth,
                          const ma_threshold* threshold, ma_report** out);
/* Audit with data never used for generative training in place of train. */
MA_API ma_status ma_null_audit(const ma_vector_set* holdout,
                               const ma_vector_set* synth,
                               const ma_threshold* threshold,
                               ma_report** out);

typedef struct ma_report_counts {
  double tau;
  double percentile_u;
  size_t n_train;
  size_t n_val;
  size_t n_synth;
  size_t n_mem;
  size_t n_copies;
  double pct_mem;
  double pct_copies;
} ma_report_counts;

MA_API ma_status ma_report_counts_get(const ma_report* report,
                                      ma_report_counts* out);
MA_API ma_status ma_report_read(const char* path, ma_report** out);
MA_API ma_status ma_report_write(const ma_report* report, const char* path);
MA_API ma_status ma_report_to_json(const ma_report* report, char** json_out);
MA_API void ma_report_free(ma_report* report);

/* Calibrates once on (train, val) and audits each checkpoint in order. */
MA_API ma_status ma_memorization_curve(const ma_vector_set* train,
                                       const ma_vector_set* val, double u,
                                       const ma_vector_set* const* checkpoints,
                                       const char* const* labels,
                                       size_t n_checkpoints, char** json_out);

/* ---- labels and classification ----------------------------------------- */

/* Latest labels from a JSONL store scored against the report's copy flags
 * on its nearest-neighbour pairs. */
MA_API ma_status ma_confusion(const char* labels_path,
                              const ma_report* report, char** json_out);
/* ROC over percentiles u_grid of the report's calibration values. Either
 * output may be NULL. */
MA_API ma_status ma_roc(const char* labels_path, const ma_report* report,
                        const double* u_grid, size_t n_u, char** json_out,
                        char** csv_out);
/* Scores the report's synthetic-side flags against a corpus.json. */
MA_API ma_status ma_score_planted(const char* corpus_manifest_path,
                                  const ma_report* report, char** json_out);

/* ---- quality and diversity --------------------------------------------- */

/* Squared Frechet distance between Gaussian summaries of two feature sets
 * with equal column counts. */
MA_API ma_status ma_fid(const ma_vector_set* a, const ma_vector_set* b,
                        double* out);
MA_API ma_status ma_ms_ssim(const ma_image* a, const ma_image* b, int scales,
                            double* out);
/* Mean MS-SSIM between each image and a seeded random partner. */
MA_API ma_status ma_diversity(const ma_image_set* images, uint64_t seed,
                              int scales, double* out);

/* ---- review service ---------------------------------------------------- */

typedef struct ma_review_options {
  const char* report_path;
  const char* const* image_dirs;
  size_t n_image_dirs;
  const char* labels_path;
  const char* host; /* NULL: 127.0.0.1 */
  int port;         /* 0: any free port */
  const char* ui_dir; /* NULL: placeholder page */
  int64_t sample_n;   /* < 0: the whole queue */
  uint64_t sample_seed;
} ma_review_options;

/* Starts serving on a background thread. */
MA_API ma_status ma_review_start(const ma_review_options* options,
                                 ma_review_server** out);
MA_API int ma_review_port(const ma_review_server* server);
/* Stops and releases the server. */
MA_API void ma_review_stop(ma_review_server* server);

/* Indices of a seeded uniform sample of n out of total without replacement,
 * ascending. `out` must hold n entries. */
MA_API ma_status ma_sample_indices(size_t total, size_t n, uint64_t seed,
                                   size_t* out);

#ifdef __cplusplus
}
#endif

#endif /* MEMAUDIT_MEMAUDIT_H_ */
