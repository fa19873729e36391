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

// Drives the memaudit binary as a subprocess.

#include <gtest/gtest.h>

#include <memaudit/memaudit.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("memaudit_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  Result Run(const std::string& args) {
    const std::string out = P("stdout.txt"), err = P("stderr.txt");
    const std::string cmd = std::string("\"") + MEMAUDIT_CLI + "\" " + args +
                            " >\"" + out + "\" 2>\"" + err + "\"";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  void WriteSet(const std::string& path, ma_role role, const std::string& prefix,
                const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> names;
    std::vector<const char*> ids;
    std::vector<float> data;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      names.push_back(prefix + std::to_string(i));
      for (double v : rows[i]) data.push_back(static_cast<float>(v));
    }
    for (const auto& n : names) ids.push_back(n.c_str());
    ma_vector_set* set = nullptr;
    ASSERT_EQ(ma_vector_set_create(role, ids.data(), rows.size(), rows[0].size(),
                                   data.data(), &set),
              MA_OK)
        << ma_last_error();
    ASSERT_EQ(ma_vector_set_write(set, path.c_str()), MA_OK);
    ma_vector_set_free(set);
  }

  fs::path dir_;
};

std::vector<std::vector<double>> Gaussian(std::size_t n, std::size_t d,
                                          unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& r : rows)
    for (auto& v : r) v = nd(gen);
  return rows;
}

// Component of v orthogonal to the ones vector and every row in basis.
std::vector<double> Orthogonalize(std::vector<double> v,
                                  std::vector<std::vector<double>> basis) {
  basis.insert(basis.begin(), std::vector<double>(v.size(), 1.0));
  std::vector<std::vector<double>> q;
  auto project_out = [](std::vector<double>& x, const std::vector<double>& e) {
    double dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * e[i];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot * e[i];
  };
  auto normalize = [](std::vector<double>& x) {
    double n = 0;
    for (double a : x) n += a * a;
    for (double& a : x) a /= std::sqrt(n);
  };
  for (auto b : basis) {
    for (const auto& e : q) project_out(b, e);
    normalize(b);
    q.push_back(b);
  }
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : q) project_out(v, e);
  return v;
}

TEST_F(Cli, MissingRequiredOptionExitsTwo) {
  const Result r = Run("synth-corpus --out " + P("c"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--dims"), std::string::npos);
  EXPECT_EQ(Run("no-such-command").code, 2);
}

TEST_F(Cli, MissingInputFileExitsThree) {
  const Result r = Run("audit --train " + P("nope.memb") + " --val " +
                       P("nope.memb") + " --synth " + P("nope.memb") +
                       " --out " + P("r.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("nope.memb"), std::string::npos);
  EXPECT_FALSE(fs::exists(P("r.json")));
}

TEST_F(Cli, NullWithoutHoldoutIsConfigError) {
  EXPECT_EQ(Run("audit --train a --val b --synth c --out d --null").code, 2);
}

TEST_F(Cli, SynthEqualToTrainFlagsEverything) {
  const auto train = Gaussian(30, 24, 1);
  WriteSet(P("train.memb"), MA_ROLE_TRAIN, "t", train);
  WriteSet(P("val.memb"), MA_ROLE_VAL, "v", Gaussian(30, 24, 2));
  WriteSet(P("synth.memb"), MA_ROLE_SYNTH, "s", train);
  const Result r = Run("audit --train " + P("train.memb") + " --val " +
                       P("val.memb") + " --synth " + P("synth.memb") +
                       " --out " + P("r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pct_mem 100.0  pct_copies 100.0"), std::string::npos)
      << r.out;
  const json rep = json::parse(Slurp(P("r.json")));
  EXPECT_EQ(rep["n_mem"], 30);
  EXPECT_TRUE(fs::exists(P("r.json.manifest.json")));
}

// 7 of 16 train rows memorized, 11 of 12 synth rows copies.
TEST_F(Cli, ReportFormatsPercentagesToOneDecimal) {
  const auto train = Gaussian(16, 64, 3);
  std::vector<std::vector<double>> synth;
  for (int i = 0; i < 11; ++i) synth.push_back(train[i % 7]);
  synth.push_back(Orthogonalize(Gaussian(1, 64, 4)[0], train));
  WriteSet(P("train.memb"), MA_ROLE_TRAIN, "t", train);
  WriteSet(P("val.memb"), MA_ROLE_VAL, "v", Gaussian(20, 64, 5));
  WriteSet(P("synth.memb"), MA_ROLE_SYNTH, "s", synth);
  Result r = Run("audit --train " + P("train.memb") + " --val " + P("val.memb") +
                 " --synth " + P("synth.memb") + " --out " + P("r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pct_mem 43.8  pct_copies 91.7"), std::string::npos)
      << r.out;
  r = Run("report --report " + P("r.json") + " --out " + P("summary"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pct_mem      43.8"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("pct_copies   91.7"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n_mem        7\n"), std::string::npos);
  EXPECT_NE(r.out.find("n_copies     11\n"), std::string::npos);
  EXPECT_EQ(Slurp(P("summary.txt")), r.out);
  const json j = json::parse(Slurp(P("summary.json")));
  EXPECT_DOUBLE_EQ(j["audit"]["pct_mem"].get<double>(), 43.75);
}

// Runs the whole pipeline into root and returns the paths of every artifact.
std::vector<std::string> Pipeline(
    const std::function<Result(const std::string&)>& run, const fs::path& root) {
  const std::string c = (root / "corpus").string();
  auto ok = [&](const std::string& args) {
    const Result r = run(args);
    EXPECT_EQ(r.code, 0) << args << "\n" << r.err;
  };
  ok("synth-corpus --out " + c +
     " --dims 16x16 --train 12 --val 10 --novel 6 --exact 2 --aug 2 --seed 4");
  const std::string model = (root / "enc.bin").string();
  ok("train-encoder --train-dir " + c + "/train --out " + model +
     " --epochs 3 --batch-k 4 --hidden-dims 8 --embedding-dim 4 --pool-grid 4 4"
     " --loss-out " + (root / "loss.json").string());
  for (const char* role : {"train", "val", "synth"}) {
    ok(std::string("embed --model ") + model + " --images " + c + "/" + role +
       " --role " + role + " --out " + (root / role).string() + ".memb");
  }
  const std::string memb = (root / "").string();
  ok("audit --train " + memb + "train.memb --val " + memb + "val.memb --synth " +
     memb + "synth.memb --out " + memb + "report.json");
  ok("curve --train " + memb + "train.memb --val " + memb +
     "val.memb --checkpoint " + memb + "synth.memb --label final --out " + memb +
     "curve.json");
  const json rep = json::parse(Slurp(root / "report.json"));
  {
    std::ofstream labels(root / "labels.jsonl");
    for (int i = 0; i < 2; ++i) {
      json l = {{"train_id", rep["nearest"][i]["train_id"]},
                {"synth_id", rep["nearest"][i]["synth_id"]},
                {"binary_label", i == 0 ? "copy" : "novel"},
                {"labeler", "u1"},
                {"timestamp", 1}};
      labels << l.dump() << "\n";
    }
  }
  ok("roc --report " + memb + "report.json --labels " + memb +
     "labels.jsonl --out " + memb + "roc");
  ok("report --report " + memb + "report.json --corpus " + c +
     "/corpus.json --features-real " + memb + "train.memb --features-synth " +
     memb + "synth.memb --synth-images " + c + "/synth --ms-ssim-scales 1 --out " +
     memb + "summary");
  return {"corpus/corpus.json", "enc.bin",     "loss.json",   "train.memb",
          "val.memb",           "synth.memb",  "report.json", "curve.json",
          "roc.json",           "roc.csv",     "summary.json", "summary.txt"};
}

TEST_F(Cli, RerunsAreByteIdentical) {
  auto run = [this](const std::string& a) { return Run(a); };
  const auto files = Pipeline(run, dir_ / "a");
  Pipeline(run, dir_ / "b");
  for (const auto& f : files) {
    const std::string a = Slurp(dir_ / "a" / f), b = Slurp(dir_ / "b" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, b) << f;
  }
  for (const auto& sub : {"train", "val", "synth"}) {
    for (const auto& e : fs::directory_iterator(dir_ / "a" / "corpus" / sub)) {
      EXPECT_EQ(Slurp(e.path()),
                Slurp(dir_ / "b" / "corpus" / sub / e.path().filename()))
          << e.path();
    }
  }
  // Manifests differ in paths and timestamps but record the same digests.
  auto digests = [](const fs::path& p) {
    std::vector<std::string> out;
    for (const auto& o : json::parse(Slurp(p))["outputs"])
      out.push_back(o["sha256"]);
    return out;
  };
  EXPECT_EQ(digests(dir_ / "a" / "report.json.manifest.json"),
            digests(dir_ / "b" / "report.json.manifest.json"));
  EXPECT_EQ(digests(dir_ / "a" / "corpus" / "manifest.json"),
            digests(dir_ / "b" / "corpus" / "manifest.json"));
  const json summary = json::parse(Slurp(dir_ / "a" / "summary.json"));
  EXPECT_TRUE(summary.contains("fid"));
  EXPECT_TRUE(summary.contains("planted"));
}

TEST_F(Cli, ConfigFileSuppliesDefaults) {
  const auto train = Gaussian(10, 12, 7);
  WriteSet(P("train.memb"), MA_ROLE_TRAIN, "t", train);
  WriteSet(P("val.memb"), MA_ROLE_VAL, "v", Gaussian(10, 12, 8));
  WriteSet(P("synth.memb"), MA_ROLE_SYNTH, "s", train);
  std::ofstream(P("cfg.json")) << json{{"audit", {{"percentile", 50}}}}.dump();
  const Result r = Run("--config " + P("cfg.json") + " audit --train " +
                       P("train.memb") + " --val " + P("val.memb") + " --synth " +
                       P("synth.memb") + " --out " + P("r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(Slurp(P("r.json")))["percentile_u"], 50.0);
}

}  // namespace
