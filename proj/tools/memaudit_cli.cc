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

// memaudit command-line front end. Talks to the toolkit only through the C
// API in memaudit/memaudit.h.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "memaudit/memaudit.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// ---- errors and handles

struct CliError {
  int exit_code;
  std::string message;
};

int ExitCodeFor(ma_status s) {
  switch (s) {
    case MA_OK:
      return 0;
    case MA_ERR_INVALID_ARGUMENT:
      return 2;
    case MA_ERR_IO:
    case MA_ERR_FORMAT:
    case MA_ERR_NOT_FOUND:
      return 3;
    case MA_ERR_NUMERICAL:
      return 4;
    default:
      return 1;
  }
}

void Ok(ma_status s) {
  if (s != MA_OK) throw CliError{ExitCodeFor(s), ma_last_error()};
}

[[noreturn]] void ConfigError(const std::string& msg) {
  throw CliError{2, msg};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using VectorSetPtr =
    std::unique_ptr<ma_vector_set, Deleter<ma_vector_set, ma_vector_set_free>>;
using ImageSetPtr =
    std::unique_ptr<ma_image_set, Deleter<ma_image_set, ma_image_set_free>>;
using EncoderPtr =
    std::unique_ptr<ma_encoder, Deleter<ma_encoder, ma_encoder_free>>;
using ThresholdPtr =
    std::unique_ptr<ma_threshold, Deleter<ma_threshold, ma_threshold_free>>;
using ReportPtr =
    std::unique_ptr<ma_report, Deleter<ma_report, ma_report_free>>;

// Takes ownership of a string returned by the library.
std::string Take(char* s) {
  std::string out = s ? s : "";
  ma_string_free(s);
  return out;
}

VectorSetPtr ReadSet(const std::string& path, ma_role role = MA_ROLE_ANY) {
  ma_vector_set* p = nullptr;
  Ok(ma_vector_set_read(path.c_str(), role, &p));
  return VectorSetPtr(p);
}

VectorSetPtr Retag(const VectorSetPtr& set, ma_role role) {
  ma_vector_set* p = nullptr;
  Ok(ma_vector_set_with_role(set.get(), role, &p));
  return VectorSetPtr(p);
}

ImageSetPtr ReadImages(const std::string& dir) {
  ma_image_set* p = nullptr;
  Ok(ma_image_set_read_dir(dir.c_str(), &p));
  return ImageSetPtr(p);
}

ReportPtr ReadReport(const std::string& path) {
  ma_report* p = nullptr;
  Ok(ma_report_read(path.c_str(), &p));
  return ReportPtr(p);
}

void WriteText(const std::string& path, const std::string& text) {
  Ok(ma_write_file(path.c_str(), text.data(), text.size()));
}

std::string FileDigest(const std::string& path) {
  char* hex = nullptr;
  Ok(ma_file_sha256(path.c_str(), &hex));
  return Take(hex);
}

// ---- JSON config files
//
// A config file is a JSON object. Top-level scalars set global options;
// an object keyed by a subcommand name sets that subcommand's options.
// Keys are long flag names; '_' and '-' are interchangeable.

class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool,
                        std::string) const override {
    return "";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config file: " + std::string(e.what()));
    }
    if (!j.is_object()) {
      throw CLI::ConversionError("config file must hold a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    Collect(j, {}, items);
    return items;
  }

 private:
  static std::string Name(std::string key) {
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    return key;
  }

  static std::string Scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  static void Collect(const nlohmann::json& j,
                      const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        Collect(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = Name(key);
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

// ---- run manifest

std::string UtcNow() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> FilesUnder(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

class Manifest {
 public:
  explicit Manifest(std::string subcommand)
      : subcommand_(std::move(subcommand)),
        started_(UtcNow()),
        t0_(std::chrono::steady_clock::now()) {}

  Json& config() { return config_; }

  void Input(const std::string& name, const std::string& path) {
    Json e;
    e["path"] = path;
    if (fs::is_directory(path)) {
      nlohmann::json files = nlohmann::json::object();
      for (const auto& f : FilesUnder(path)) {
        files[fs::relative(f, path).string()] = FileDigest(f);
      }
      char* hex = nullptr;
      Ok(ma_json_digest(files.dump().c_str(), &hex));
      e["sha256"] = Take(hex);
      e["files"] = files.size();
    } else {
      e["sha256"] = FileDigest(path);
    }
    inputs_[name] = e;
  }

  void Output(const std::string& path) {
    Json e;
    e["path"] = path;
    e["sha256"] = FileDigest(path);
    outputs_.push_back(e);
  }

  void Write(const std::string& path) {
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0_)
                            .count();
    Json j;
    j["subcommand"] = subcommand_;
    j["toolkit_version"] = ma_version();
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["started_at"] = started_;
    j["finished_at"] = UtcNow();
    j["wall_clock_s"] = wall;
    WriteText(path, j.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  std::string started_;
  std::chrono::steady_clock::time_point t0_;
  Json config_ = Json::object();
  Json inputs_ = Json::object();
  Json outputs_ = Json::array();
};

std::string ManifestPath(const std::string& flag, const std::string& out) {
  if (!flag.empty()) return flag;
  if (fs::is_directory(out)) return (fs::path(out) / "manifest.json").string();
  return out + ".manifest.json";
}

// ---- shared option groups

std::vector<std::size_t> ParseDims(const std::string& s) {
  std::vector<std::size_t> dims;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, 'x')) {
    if (part.empty() ||
        part.find_first_not_of("0123456789") != std::string::npos) {
      ConfigError("--dims must look like 32x32 or 16x32x32, got '" + s + "'");
    }
    dims.push_back(std::stoull(part));
  }
  if (dims.size() != 2 && dims.size() != 3) {
    ConfigError("--dims must have 2 or 3 extents, got '" + s + "'");
  }
  return dims;
}

ma_role ParseRoleName(const std::string& s) {
  if (s == "train") return MA_ROLE_TRAIN;
  if (s == "val") return MA_ROLE_VAL;
  if (s == "synth") return MA_ROLE_SYNTH;
  ConfigError("--role must be train, val or synth");
}

struct AugOptions {
  std::vector<double> flip_prob = {0.5, 0.5, 0.5};
  std::vector<double> rotation_deg = {-5.0, 5.0};
  std::vector<double> contrast_scale = {0.9, 1.1};
  std::vector<double> brightness_shift = {-0.05, 0.05};
  std::uint64_t seed = 0;

  void Add(CLI::App* app) {
    app->add_option("--flip-prob", flip_prob,
                    "Flip probability per axis (3 values)")
        ->expected(3)
        ->capture_default_str();
    app->add_option("--rotation-deg", rotation_deg, "Rotation range (lo hi)")
        ->expected(2)
        ->capture_default_str();
    app->add_option("--contrast-scale", contrast_scale,
                    "Contrast scale range (lo hi)")
        ->expected(2)
        ->capture_default_str();
    app->add_option("--brightness-shift", brightness_shift,
                    "Brightness shift range (lo hi)")
        ->expected(2)
        ->capture_default_str();
    app->add_option("--aug-seed", seed, "Augmentation seed")
        ->capture_default_str();
  }

  Json ToJson() const {
    Json j;
    j["flip_prob"] = flip_prob;
    j["rotation_deg"] = rotation_deg;
    j["contrast_scale"] = contrast_scale;
    j["brightness_shift"] = brightness_shift;
    j["seed"] = seed;
    return j;
  }

  // Validated and normalized by the library.
  Json Resolve() const {
    char* out = nullptr;
    Ok(ma_augmentation_resolve(ToJson().dump().c_str(), &out));
    return Json::parse(Take(out));
  }
};

int g_threads = -1;

void ApplyThreads() {
  if (g_threads >= 0) Ok(ma_set_threads(g_threads));
}

std::string Pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string Num(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---- subcommands

struct SynthCorpus {
  std::string out;
  std::string dims;
  std::uint64_t seed = 0;
  std::size_t train = 100, val = 1000, novel = 80, exact = 10, aug = 10;
  AugOptions augmentation;
  std::string manifest;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand(
        "synth-corpus", "Generate a planted corpus with known copies");
    app->add_option("--out", out, "Output directory")->required();
    app->add_option("--dims", dims, "Image extents, e.g. 32x32 or 16x32x32")
        ->required();
    app->add_option("--seed", seed, "Corpus seed")->capture_default_str();
    app->add_option("--train", train, "Training images")->capture_default_str();
    app->add_option("--val", val, "Validation images")->capture_default_str();
    app->add_option("--novel", novel, "Novel synthetic images")
        ->capture_default_str();
    app->add_option("--exact", exact, "Exact copies")->capture_default_str();
    app->add_option("--aug", aug, "Augmented copies")->capture_default_str();
    augmentation.Add(app);
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    Json spec;
    spec["n_train"] = train;
    spec["n_val"] = val;
    spec["n_novel_synth"] = novel;
    spec["n_exact_copies"] = exact;
    spec["n_augmented_copies"] = aug;
    spec["dims"] = ParseDims(dims);
    spec["seed"] = seed;
    char* resolved = nullptr;
    Ok(ma_corpus_spec_resolve(spec.dump().c_str(), &resolved));
    Manifest m("synth-corpus");
    m.config()["corpus"] = Json::parse(Take(resolved));
    m.config()["augmentation"] = augmentation.Resolve();

    char* corpus_json = nullptr;
    Ok(ma_corpus_generate(spec.dump().c_str(),
                          augmentation.ToJson().dump().c_str(), out.c_str(),
                          &corpus_json));
    ma_string_free(corpus_json);
    const std::string mpath = ManifestPath(manifest, out);
    for (const auto& f : FilesUnder(out)) {
      if (f == mpath || fs::path(f).filename() == "manifest.json") continue;
      m.Output(f);
    }
    m.Write(mpath);
    std::cout << "wrote " << train << " train, " << val << " val, "
              << (novel + exact + aug) << " synth images to " << out << "\n";
  }
};

struct TrainEncoder {
  std::string train_dir, out, loss_out, manifest;
  std::size_t batch_k = 25, epochs = 800, embedding_dim = 32;
  double learning_rate = 0.05, momentum = 0.9, tau_temp = 0.5;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden_dims = {128, 64};
  std::vector<std::size_t> pool_grid;
  AugOptions augmentation;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand(
        "train-encoder", "Train the contrastive encoder on training images");
    app->add_option("--train-dir", train_dir, "Directory of training .mimg")
        ->required();
    app->add_option("--out", out, "Model file")->required();
    app->add_option("--batch-k", batch_k, "Pairs per batch")
        ->capture_default_str();
    app->add_option("--epochs", epochs)->capture_default_str();
    app->add_option("--learning-rate", learning_rate)->capture_default_str();
    app->add_option("--momentum", momentum)->capture_default_str();
    app->add_option("--tau-temp", tau_temp, "NT-Xent temperature")
        ->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--hidden-dims", hidden_dims)->capture_default_str();
    app->add_option("--embedding-dim", embedding_dim)->capture_default_str();
    app->add_option("--pool-grid", pool_grid,
                    "Pooling cells per axis (default 8, 4 for 3D)");
    augmentation.Add(app);
    app->add_option("--loss-out", loss_out, "Per-epoch loss trace (JSON)");
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    Json cfg;
    cfg["batch_k"] = batch_k;
    cfg["epochs"] = epochs;
    cfg["learning_rate"] = learning_rate;
    cfg["momentum"] = momentum;
    cfg["tau_temp"] = tau_temp;
    cfg["seed"] = seed;
    cfg["hidden_dims"] = hidden_dims;
    cfg["embedding_dim"] = embedding_dim;
    char* resolved = nullptr;
    Ok(ma_train_config_resolve(cfg.dump().c_str(), &resolved));
    Manifest m("train-encoder");
    m.config()["train"] = Json::parse(Take(resolved));
    m.config()["augmentation"] = augmentation.Resolve();
    m.config()["pool_grid"] = pool_grid;
    m.Input("train_dir", train_dir);

    auto images = ReadImages(train_dir);
    ma_encoder* enc = nullptr;
    char* trace = nullptr;
    const std::string grid = pool_grid.empty() ? "" : Json(pool_grid).dump();
    Ok(ma_encoder_train(images.get(), cfg.dump().c_str(),
                        augmentation.ToJson().dump().c_str(),
                        grid.empty() ? nullptr : grid.c_str(), &enc, &trace));
    EncoderPtr model(enc);
    const Json losses = Json::parse(Take(trace));
    Ok(ma_encoder_write(model.get(), out.c_str()));
    m.Output(out);
    if (!loss_out.empty()) {
      Json j;
      j["loss_trace"] = losses;
      WriteText(loss_out, j.dump(2) + "\n");
      m.Output(loss_out);
    }
    m.Write(ManifestPath(manifest, out));
    std::cout << "trained " << epochs << " epochs; loss "
              << Num(losses.front().get<double>(), 4) << " -> "
              << Num(losses.back().get<double>(), 4) << "\n";
  }
};

struct Embed {
  std::string model, images, role, out, manifest;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand("embed", "Embed a directory of images");
    app->add_option("--model", model, "Model file")->required();
    app->add_option("--images", images, "Directory of .mimg")->required();
    app->add_option("--role", role, "train, val or synth")->required();
    app->add_option("--out", out, "Output .memb")->required();
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    const ma_role r = ParseRoleName(role);
    Manifest m("embed");
    m.config()["role"] = role;
    m.Input("model", model);
    m.Input("images", images);
    ma_encoder* enc = nullptr;
    Ok(ma_encoder_read(model.c_str(), &enc));
    EncoderPtr encoder(enc);
    auto imgs = ReadImages(images);
    ma_vector_set* set = nullptr;
    Ok(ma_encoder_embed(encoder.get(), imgs.get(), r, &set));
    VectorSetPtr emb(set);
    Ok(ma_vector_set_write(emb.get(), out.c_str()));
    m.Output(out);
    m.Write(ManifestPath(manifest, out));
    std::cout << "embedded " << ma_vector_set_rows(emb.get()) << " "
              << role << " images into " << ma_vector_set_cols(emb.get())
              << " dimensions\n";
  }
};

struct Audit {
  std::string train, val, synth, holdout, out, manifest;
  double percentile = 95.0;
  bool null_audit = false;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand(
        "audit", "Detect memorized training samples and synthetic copies");
    app->add_option("--train", train, "Training embeddings (.memb)")
        ->required();
    app->add_option("--val", val, "Validation embeddings (.memb)")
        ->required();
    app->add_option("--synth", synth, "Synthetic embeddings (.memb)")
        ->required();
    app->add_option("--percentile", percentile,
                    "Percentile u of rho_NN-val used as tau")
        ->capture_default_str();
    app->add_flag("--null", null_audit,
                  "Audit --holdout instead of --train (false-positive "
                  "estimate)");
    app->add_option("--holdout", holdout,
                    "Data never used for generative training (.memb)");
    app->add_option("--out", out, "Report JSON")->required();
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    if (null_audit && holdout.empty()) ConfigError("--null needs --holdout");
    if (!null_audit && !holdout.empty()) ConfigError("--holdout needs --null");
    Manifest m("audit");
    m.config()["percentile_u"] = percentile;
    m.config()["null"] = null_audit;
    m.Input("train", train);
    m.Input("val", val);
    m.Input("synth", synth);
    if (null_audit) m.Input("holdout", holdout);

    auto tr = Retag(ReadSet(train), MA_ROLE_TRAIN);
    auto va = Retag(ReadSet(val), MA_ROLE_VAL);
    auto sy = Retag(ReadSet(synth), MA_ROLE_SYNTH);
    ma_threshold* th = nullptr;
    Ok(ma_calibrate(tr.get(), va.get(), percentile, &th));
    ThresholdPtr tau(th);
    ma_report* rep = nullptr;
    if (null_audit) {
      auto ho = Retag(ReadSet(holdout), MA_ROLE_TRAIN);
      Ok(ma_null_audit(ho.get(), sy.get(), tau.get(), &rep));
    } else {
      Ok(ma_audit(tr.get(), sy.get(), tau.get(), &rep));
    }
    ReportPtr report(rep);
    Ok(ma_report_write(report.get(), out.c_str()));
    m.Output(out);
    m.Write(ManifestPath(manifest, out));
    ma_report_counts c{};
    Ok(ma_report_counts_get(report.get(), &c));
    std::cout << "tau " << Num(c.tau, 6) << "  pct_mem " << Pct(c.pct_mem)
              << "  pct_copies " << Pct(c.pct_copies) << "\n";
  }
};

struct Curve {
  std::string train, val, out, manifest;
  std::vector<std::string> checkpoints, labels;
  double percentile = 95.0;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand(
        "curve", "Memorization over checkpoints with one calibrated tau");
    app->add_option("--train", train, "Training embeddings")->required();
    app->add_option("--val", val, "Validation embeddings")->required();
    app->add_option("--checkpoint", checkpoints,
                    "Synthetic embeddings per checkpoint, in order")
        ->required();
    app->add_option("--label", labels,
                    "Checkpoint labels (default: file stems)");
    app->add_option("--percentile", percentile)->capture_default_str();
    app->add_option("--out", out, "Curve JSON")->required();
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    if (!labels.empty() && labels.size() != checkpoints.size()) {
      ConfigError("--label count must match --checkpoint count");
    }
    if (labels.empty()) {
      for (const auto& c : checkpoints) {
        labels.push_back(fs::path(c).stem().string());
      }
    }
    Manifest m("curve");
    m.config()["percentile_u"] = percentile;
    m.config()["labels"] = labels;
    m.Input("train", train);
    m.Input("val", val);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      m.Input("checkpoint:" + labels[i], checkpoints[i]);
    }
    auto tr = Retag(ReadSet(train), MA_ROLE_TRAIN);
    auto va = Retag(ReadSet(val), MA_ROLE_VAL);
    std::vector<VectorSetPtr> sets;
    std::vector<const ma_vector_set*> ptrs;
    std::vector<const char*> names;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      sets.push_back(Retag(ReadSet(checkpoints[i]), MA_ROLE_SYNTH));
      ptrs.push_back(sets.back().get());
      names.push_back(labels[i].c_str());
    }
    char* json = nullptr;
    Ok(ma_memorization_curve(tr.get(), va.get(), percentile, ptrs.data(),
                             names.data(), ptrs.size(), &json));
    const std::string text = Take(json);
    WriteText(out, text);
    m.Output(out);
    m.Write(ManifestPath(manifest, out));
    for (const auto& p : Json::parse(text)["checkpoints"]) {
      std::cout << p["label"].get<std::string>() << "  pct_mem "
                << Pct(p["pct_mem"].get<double>()) << "  pct_copies "
                << Pct(p["pct_copies"].get<double>()) << "\n";
    }
  }
};

struct Roc {
  std::string report, labels, out, manifest;
  std::vector<double> percentiles = {80, 90, 95, 99};

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand(
        "roc", "ROC of labeled pairs over percentile thresholds");
    app->add_option("--report", report, "Audit report JSON")->required();
    app->add_option("--labels", labels, "Label store (JSONL)")->required();
    app->add_option("--percentiles", percentiles)->capture_default_str();
    app->add_option("--out", out,
                    "Output prefix; writes <out>.json and <out>.csv")
        ->required();
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    Manifest m("roc");
    m.config()["percentiles"] = percentiles;
    m.Input("report", report);
    m.Input("labels", labels);
    auto rep = ReadReport(report);
    char* json = nullptr;
    char* csv = nullptr;
    Ok(ma_roc(labels.c_str(), rep.get(), percentiles.data(),
              percentiles.size(), &json, &csv));
    const std::string json_text = Take(json);
    const std::string csv_text = Take(csv);
    WriteText(out + ".json", json_text);
    WriteText(out + ".csv", csv_text);
    m.Output(out + ".json");
    m.Output(out + ".csv");
    m.Write(ManifestPath(manifest, out));
    std::cout << csv_text;
  }
};

struct Report {
  std::string report, labels, corpus, features_real, features_synth,
      synth_images, out, manifest;
  std::uint64_t diversity_seed = 0;
  int ms_ssim_scales = 5;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand("report", "Human-readable audit summary");
    app->add_option("--report", report, "Audit report JSON")->required();
    app->add_option("--labels", labels, "Label store for confusion counts");
    app->add_option("--corpus", corpus,
                    "Planted corpus.json for detector scoring");
    app->add_option("--features-real", features_real,
                    "Real feature set for FID (.memb)");
    app->add_option("--features-synth", features_synth,
                    "Synthetic feature set for FID (.memb)");
    app->add_option("--synth-images", synth_images,
                    "Synthetic image directory for MS-SSIM diversity");
    app->add_option("--diversity-seed", diversity_seed)->capture_default_str();
    app->add_option("--ms-ssim-scales", ms_ssim_scales)->capture_default_str();
    app->add_option("--out", out,
                    "Output prefix; writes <out>.json and <out>.txt");
    app->add_option("--manifest", manifest, "Run manifest path");
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    if (features_real.empty() != features_synth.empty()) {
      ConfigError("FID needs both --features-real and --features-synth");
    }
    Manifest m("report");
    m.config()["diversity_seed"] = diversity_seed;
    m.config()["ms_ssim_scales"] = ms_ssim_scales;
    m.Input("report", report);
    auto rep = ReadReport(report);
    ma_report_counts c{};
    Ok(ma_report_counts_get(rep.get(), &c));

    Json j;
    Json audit;
    audit["tau"] = c.tau;
    audit["percentile_u"] = c.percentile_u;
    audit["n_train"] = c.n_train;
    audit["n_synth"] = c.n_synth;
    audit["n_mem"] = c.n_mem;
    audit["n_copies"] = c.n_copies;
    audit["pct_mem"] = c.pct_mem;
    audit["pct_copies"] = c.pct_copies;
    j["audit"] = audit;

    std::ostringstream t;
    t << "memaudit report\n";
    t << "  tau          " << Num(c.tau, 4) << "  (percentile "
      << Num(c.percentile_u, 0) << " of rho_NN-val)\n";
    t << "  n_train      " << c.n_train << "\n";
    t << "  n_synth      " << c.n_synth << "\n";
    t << "  n_mem        " << c.n_mem << "\n";
    t << "  n_copies     " << c.n_copies << "\n";
    t << "  pct_mem      " << Pct(c.pct_mem)
      << "  (% of training data memorized)\n";
    t << "  pct_copies   " << Pct(c.pct_copies)
      << "  (% of synthetic samples that are copies)\n";

    if (!features_real.empty()) {
      m.Input("features_real", features_real);
      m.Input("features_synth", features_synth);
      auto a = ReadSet(features_real);
      auto b = ReadSet(features_synth);
      double fid = 0.0;
      Ok(ma_fid(a.get(), b.get(), &fid));
      j["fid"] = fid;
      t << "  fid          " << Num(fid, 4) << "\n";
    }
    if (!synth_images.empty()) {
      m.Input("synth_images", synth_images);
      auto imgs = ReadImages(synth_images);
      double d = 0.0;
      Ok(ma_diversity(imgs.get(), diversity_seed, ms_ssim_scales, &d));
      j["ms_ssim_diversity"] = d;
      t << "  ms_ssim      " << Num(d, 4) << "  (diversity; lower is more "
        << "diverse)\n";
    }
    if (!labels.empty()) {
      m.Input("labels", labels);
      char* s = nullptr;
      Ok(ma_confusion(labels.c_str(), rep.get(), &s));
      const Json conf = Json::parse(Take(s));
      j["confusion"] = conf;
      auto rate = [](const Json& v) {
        return v.is_null() ? std::string("undefined")
                           : Pct(100.0 * v.get<double>());
      };
      t << "  labeled      " << conf["n_labeled"].get<std::size_t>()
        << "  (tp " << conf["tp"] << ", fp " << conf["fp"] << ", tn "
        << conf["tn"] << ", fn " << conf["fn"] << ")\n";
      t << "  sensitivity  " << rate(conf["sensitivity"]) << "\n";
      t << "  specificity  " << rate(conf["specificity"]) << "\n";
    }
    if (!corpus.empty()) {
      m.Input("corpus", corpus);
      char* s = nullptr;
      Ok(ma_score_planted(corpus.c_str(), rep.get(), &s));
      const Json score = Json::parse(Take(s));
      j["planted"] = score;
      auto opt = [](const Json& v) {
        return v.is_null() ? std::string("undefined") : Num(v.get<double>(), 3);
      };
      t << "  recall_exact " << opt(score["recall_exact"]) << "\n";
      t << "  recall_aug   " << opt(score["recall_aug"]) << "\n";
      t << "  precision    " << opt(score["precision"]) << "\n";
    }

    const std::string text = t.str();
    std::cout << text;
    if (!out.empty()) {
      WriteText(out + ".json", j.dump(2) + "\n");
      WriteText(out + ".txt", text);
      m.Output(out + ".json");
      m.Output(out + ".txt");
      m.Write(ManifestPath(manifest, out));
    }
  }
};

volatile std::sig_atomic_t g_stop = 0;
void OnSignal(int) { g_stop = 1; }

struct Review {
  std::string report, labels, host = "127.0.0.1", ui_dir;
  std::vector<std::string> images;
  int port = 8765;
  long sample = -1;
  std::uint64_t sample_seed = 0;
  double duration = 0.0;

  void Add(CLI::App& root) {
    auto* app = root.add_subcommand("review", "Serve the pair-review API");
    app->add_option("--report", report, "Audit report JSON")->required();
    app->add_option("--images", images,
                    "Directories holding <id>.mimg (searched in order)");
    app->add_option("--labels", labels, "Label store (JSONL)")->required();
    app->add_option("--host", host)->capture_default_str();
    app->add_option("--port", port, "0 picks a free port")
        ->capture_default_str();
    app->add_option("--ui-dir", ui_dir, "Static UI bundle served at /");
    app->add_option("--sample", sample,
                    "Review a seeded random subset of N pairs");
    app->add_option("--sample-seed", sample_seed)->capture_default_str();
    app->add_option("--duration", duration,
                    "Stop after this many seconds (0: until interrupted)")
        ->capture_default_str();
    app->callback([this] {
      ApplyThreads();
      Run();
    });
  }

  void Run() {
    std::vector<const char*> dirs;
    for (const auto& d : images) dirs.push_back(d.c_str());
    ma_review_options o{};
    o.report_path = report.c_str();
    o.image_dirs = dirs.data();
    o.n_image_dirs = dirs.size();
    o.labels_path = labels.c_str();
    o.host = host.c_str();
    o.port = port;
    o.ui_dir = ui_dir.empty() ? nullptr : ui_dir.c_str();
    o.sample_n = sample;
    o.sample_seed = sample_seed;
    ma_review_server* server = nullptr;
    Ok(ma_review_start(&o, &server));
    std::signal(SIGINT, OnSignal);
    std::signal(SIGTERM, OnSignal);
    std::cout << "serving http://" << host << ":" << ma_review_port(server)
              << "/" << std::endl;
    const auto t0 = std::chrono::steady_clock::now();
    while (!g_stop) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      if (duration > 0.0 &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count() >= duration) {
        break;
      }
    }
    ma_review_stop(server);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memaudit: memorization audits for generative models"};
  app.set_version_flag("--version", std::string(ma_version()));
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "",
                 "JSON config file; command-line flags take precedence");
  app.add_option("--threads", g_threads,
                 "Worker cap (default: MEMAUDIT_THREADS or all cores)");

  SynthCorpus synth_corpus;
  TrainEncoder train_encoder;
  Embed embed;
  Audit audit;
  Curve curve;
  Roc roc;
  Report report;
  Review review;
  synth_corpus.Add(app);
  train_encoder.Add(app);
  embed.Add(app);
  audit.Add(app);
  curve.Add(app);
  roc.Add(app);
  report.Add(app);
  review.Add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    const CLI::App* failing = &app;
    for (const CLI::App* sub : app.get_subcommands()) failing = sub;
    std::cerr << failing->help();
    return 2;
  } catch (const CliError& e) {
    std::cerr << "memaudit: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "memaudit: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
