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

#include <gtest/gtest.h>

#include <httplib.h>
#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "core/labels.h"
#include "detection/detection.h"
#include "review/png.h"
#include "review/server.h"
#include "review/session.h"
#include "test_util.h"

namespace memaudit::review {
namespace {

using testing::TempDir;

// --- PNG ----------------------------------------------------------------------

struct DecodedPng {
  std::uint32_t width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  std::vector<std::uint8_t> pixels;
};

std::uint32_t Be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | p[3];
}

// Minimal reader for 8-bit grayscale, filter 0 images; checks every CRC.
DecodedPng DecodePng(const std::string& data) {
  static const unsigned char kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  EXPECT_GE(data.size(), 8u);
  EXPECT_EQ(std::memcmp(data.data(), kSig, 8), 0);
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t pos = 8;
  DecodedPng out;
  std::string idat;
  bool end = false;
  while (pos + 12 <= data.size() && !end) {
    const std::uint32_t len = Be32(p + pos);
    const std::string type(data.data() + pos + 4, 4);
    const unsigned char* body = p + pos + 8;
    const std::uint32_t crc = Be32(body + len);
    EXPECT_EQ(crc32(crc32(0, p + pos + 4, 4), body, len), crc) << type;
    if (type == "IHDR") {
      out.width = Be32(body);
      out.height = Be32(body + 4);
      out.bit_depth = body[8];
      out.color_type = body[9];
    } else if (type == "IDAT") {
      idat.append(reinterpret_cast<const char*>(body), len);
    } else if (type == "IEND") {
      end = true;
    }
    pos += 12 + len;
  }
  EXPECT_TRUE(end);
  std::vector<unsigned char> raw((out.width + 1) * out.height);
  uLongf raw_len = raw.size();
  EXPECT_EQ(uncompress(raw.data(), &raw_len,
                       reinterpret_cast<const Bytef*>(idat.data()), idat.size()),
            Z_OK);
  EXPECT_EQ(raw_len, raw.size());
  for (std::uint32_t r = 0; r < out.height; ++r) {
    EXPECT_EQ(raw[r * (out.width + 1)], 0);
    out.pixels.insert(out.pixels.end(), raw.begin() + r * (out.width + 1) + 1,
                      raw.begin() + (r + 1) * (out.width + 1));
  }
  return out;
}

TEST(Png, EncodesGrayscaleRoundTrip) {
  std::vector<std::uint8_t> px(7 * 3);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(i * 12);
  const DecodedPng d = DecodePng(EncodePngGray8(px, 7, 3));
  EXPECT_EQ(d.width, 7u);
  EXPECT_EQ(d.height, 3u);
  EXPECT_EQ(d.bit_depth, 8);
  EXPECT_EQ(d.color_type, 0);
  EXPECT_EQ(d.pixels, px);
}

TEST(Png, RenderMapsMinMaxAndSlices) {
  ImageTensor img({2, 3});
  const float v[] = {0.2f, 0.4f, 0.6f, 0.8f, 1.0f, 0.2f};
  std::copy(std::begin(v), std::end(v), img.mutable_values().begin());
  const DecodedPng d = DecodePng(RenderPng(img, std::nullopt));
  EXPECT_EQ(d.pixels, (std::vector<std::uint8_t>{0, 64, 128, 191, 255, 0}));
  EXPECT_THROW(RenderPng(img, 0), Error);

  ImageTensor vol({3, 2, 2});
  for (std::size_t i = 0; i < 12; ++i) vol.mutable_values()[i] = float(i);
  EXPECT_EQ(SliceCount(vol), 3u);
  EXPECT_EQ(SliceCount(img), 1u);
  const DecodedPng mid = DecodePng(RenderPng(vol, std::nullopt));
  EXPECT_EQ(mid.pixels, DecodePng(RenderPng(vol, 1)).pixels);
  EXPECT_EQ(DecodePng(RenderPng(vol, 2)).pixels[3], 255);
  EXPECT_THROW(RenderPng(vol, 3), Error);
}

// --- Queue and sampling -------------------------------------------------------

detection::AuditReport MakeReport(std::size_t n, std::uint64_t seed,
                                  double tau = 0.9) {
  detection::AuditReport r;
  r.tau.tau = tau;
  r.tau.percentile_u = 95;
  r.n_train = n;
  r.n_synth = n;
  r.n_val = n;
  r.config_digest = std::string(64, 'a');
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const float rho = static_cast<float>(rng.Uniform(0.5, 1.0));
    r.nearest.push_back({"t" + std::to_string(i), "s" + std::to_string(i), rho});
    if (rho >= tau) r.memorized.push_back(r.nearest.back());
  }
  r.n_mem = r.memorized.size();
  return r;
}

TEST(Queue, SortedByRhoDescendingWithStableTies) {
  auto r = MakeReport(30, 1);
  r.nearest[3].rho = r.nearest[7].rho = 0.75f;
  const auto q = PairQueue(r);
  ASSERT_EQ(q.size(), 30u);
  for (std::size_t i = 1; i < q.size(); ++i) EXPECT_GE(q[i - 1].rho, q[i].rho);
  const auto a = std::find_if(q.begin(), q.end(), [](auto& p) { return p.train_id == "t3"; });
  const auto b = std::find_if(q.begin(), q.end(), [](auto& p) { return p.train_id == "t7"; });
  EXPECT_LT(a, b);
  for (const auto& p : q) EXPECT_EQ(p.predicted_copy, p.rho >= 0.9f);
}

TEST(Sampling, MatchesScriptedOracle) {
  const Json& o = testing::Oracles()["sample_pairs"];
  EXPECT_EQ(SampleIndices(o["total"], o["n"], o["seed"].get<std::uint64_t>()),
            o["indices"].get<std::vector<std::size_t>>());
}

TEST(Sampling, FullSampleAndDeterminism) {
  const auto q = PairQueue(MakeReport(40, 2));
  EXPECT_EQ(SamplePairs(q, 40, 5), q);
  EXPECT_EQ(SamplePairs(q, 10, 5), SamplePairs(q, 10, 5));
  EXPECT_NE(SampleIndices(40, 10, 5), SampleIndices(40, 10, 6));
  const auto idx = SampleIndices(40, 10, 5);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
  EXPECT_THROW(SampleIndices(5, 6, 0), Error);
}

TEST(Sampling, ParseStatus) {
  EXPECT_EQ(ParsePairStatus("pending"), PairStatus::kPending);
  EXPECT_EQ(ParsePairStatus(""), PairStatus::kAll);
  EXPECT_THROW(ParsePairStatus("done"), Error);
}

// --- Session fixture ----------------------------------------------------------

class ReviewFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    std::filesystem::create_directories(dir_ / "train");
    std::filesystem::create_directories(dir_ / "synth");
    report_ = MakeReport(5, 3, 0.8);
    report_.nearest[0].rho = 0.99f;  // guarantees one predicted copy
    for (std::size_t i = 0; i < 5; ++i) {
      const bool vol = i == 4;
      ImageTensor t(vol ? std::vector<std::size_t>{6, 16, 16}
                        : std::vector<std::size_t>{16, 16});
      Rng rng(i);
      for (float& v : t.mutable_values()) v = static_cast<float>(rng.Uniform());
      WriteTensor(t, dir_ / "train" / ("t" + std::to_string(i) + ".mimg"));
      WriteTensor(t, dir_ / "synth" / ("s" + std::to_string(i) + ".mimg"));
    }
    WriteJsonFile(detection::ToJson(report_), dir_ / "report.json");
  }

  SessionOptions Options() const {
    SessionOptions o;
    o.report_path = dir_ / "report.json";
    o.image_dirs = {dir_ / "train", dir_ / "synth"};
    o.labels_path = dir_ / "labels.jsonl";
    return o;
  }

  TempDir dir_;
  detection::AuditReport report_;
};

LabelRecord Lab(const std::string& t, const std::string& s,
                std::optional<BinaryLabel> b, std::optional<Grade> g = {},
                const std::string& who = "u1") {
  LabelRecord r;
  r.train_id = t;
  r.synth_id = s;
  r.binary_label = b;
  r.grade = g;
  r.labeler = who;
  return r;
}

TEST_F(ReviewFixture, SessionLabelsAndMetrics) {
  auto s = ReviewSession::Open(Options());
  ASSERT_EQ(s->pairs().size(), 5u);
  EXPECT_EQ(s->pairs()[0].train_id, "t0");
  EXPECT_EQ(s->Select(PairStatus::kPending).size(), 5u);
  const auto stored = s->AddLabel(Lab("t0", "s0", BinaryLabel::kCopy));
  EXPECT_GT(stored.timestamp, 0);
  EXPECT_TRUE(s->IsLabeled(0));
  EXPECT_EQ(s->Select(PairStatus::kLabeled), (std::vector<std::size_t>{0}));
  EXPECT_THROW(s->AddLabel(Lab("t0", "s1", BinaryLabel::kCopy)), Error);
  const auto m = s->Metrics();
  EXPECT_EQ(m.counts.tp, 1u);
  EXPECT_EQ(m.sensitivity, 1.0);
  EXPECT_FALSE(m.specificity.has_value());
  EXPECT_TRUE(s->MetricsJson()["specificity"].is_null());
}

TEST_F(ReviewFixture, LatestWinsAndHistoryKept) {
  auto s = ReviewSession::Open(Options());
  auto first = Lab("t1", "s1", std::nullopt, Grade::kB);
  first.timestamp = 100;
  auto second = Lab("t1", "s1", std::nullopt, Grade::kC);
  second.timestamp = 200;
  s->AddLabel(first);
  s->AddLabel(second);
  const auto idx = *s->Find("t1", "s1");
  const auto latest = s->LabelsFor(idx);
  ASSERT_EQ(latest.size(), 1u);
  EXPECT_EQ(latest[0].grade, Grade::kC);
  EXPECT_EQ(ReadLabels(Options().labels_path).size(), 2u);
}

TEST_F(ReviewFixture, UnresolvableImagesRejectedAtOpen) {
  std::filesystem::remove(dir_ / "synth" / "s2.mimg");
  EXPECT_THROW(ReviewSession::Open(Options()), Error);
  ImageResolver r({dir_ / "train"});
  EXPECT_THROW(r.Resolve("../train/t0"), Error);
  EXPECT_THROW(r.Resolve(".."), Error);
  EXPECT_EQ(r.Resolve("t0"), dir_ / "train" / "t0.mimg");
}

TEST_F(ReviewFixture, SampledSessionKeepsSubset) {
  auto o = Options();
  o.sample_n = 3;
  o.sample_seed = 4;
  auto s = ReviewSession::Open(o);
  EXPECT_EQ(s->pairs().size(), 3u);
  EXPECT_TRUE(s->SessionJson()["sampled"].get<bool>());
}

// 100 pairs labeled at random; the metrics view must equal a direct count.
TEST(ReviewMetrics, SeededSessionMatchesTabulation) {
  TempDir dir;
  const auto report = MakeReport(100, 7, 0.75);
  SessionOptions o;
  o.report_path = dir / "r.json";
  o.labels_path = dir / "l.jsonl";
  ReviewSession s(report, o);
  Rng rng(8);
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& p : s.pairs()) {
    const bool copy = rng.Bernoulli(0.5);
    s.AddLabel(Lab(p.train_id, p.synth_id,
                   copy ? BinaryLabel::kCopy : BinaryLabel::kNovel));
    tp += copy && p.predicted_copy;
    fn += copy && !p.predicted_copy;
    fp += !copy && p.predicted_copy;
    tn += !copy && !p.predicted_copy;
  }
  const Json m = s.MetricsJson();
  EXPECT_EQ(m["tp"], tp);
  EXPECT_EQ(m["fp"], fp);
  EXPECT_EQ(m["tn"], tn);
  EXPECT_EQ(m["fn"], fn);
  EXPECT_EQ(m["n_labeled"], 100u);
  EXPECT_NEAR(m["sensitivity"].get<double>(), double(tp) / (tp + fn), 1e-12);
  EXPECT_NEAR(m["specificity"].get<double>(), double(tn) / (tn + fp), 1e-12);
}

// --- HTTP ---------------------------------------------------------------------

class ServerFixture : public ReviewFixture {
 protected:
  void SetUp() override {
    ReviewFixture::SetUp();
    Launch();
  }
  void TearDown() override { server_->Stop(); }

  void Launch(ServerOptions opts = {}) {
    if (server_) server_->Stop();
    server_ = std::make_unique<ReviewServer>(
        std::shared_ptr<ReviewSession>(ReviewSession::Open(Options())), opts);
    const int port = server_->Start();
    ASSERT_GT(port, 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port);
  }

  Json GetJson(const std::string& path, int expected_status = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected_status) << path << ": " << res->body;
    EXPECT_NE(res->get_header_value("Content-Type").find("application/json"),
              std::string::npos);
    return Json::parse(res->body);
  }

  int Post(const std::string& body, Json* out = nullptr) {
    auto res = client_->Post("/api/labels", body, "application/json");
    EXPECT_TRUE(res);
    if (!res) return -1;
    if (out) *out = Json::parse(res->body);
    return res->status;
  }

  std::unique_ptr<ReviewServer> server_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerFixture, SessionEndpoint) {
  const Json j = GetJson("/api/session");
  EXPECT_EQ(j["n_pairs"], 5);
  EXPECT_EQ(j["n_pending"], 5);
  EXPECT_NEAR(j["tau"].get<double>(), 0.8, 1e-12);
}

TEST_F(ServerFixture, PendingPairsSortedByRho) {
  const Json j = GetJson("/api/pairs?status=pending");
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 5u);
  for (std::size_t i = 0; i < j.size(); ++i) {
    EXPECT_TRUE(j[i].contains("train_id"));
    EXPECT_TRUE(j[i].contains("synth_id"));
    if (i > 0) EXPECT_GE(j[i - 1]["rho"].get<double>(), j[i]["rho"].get<double>());
  }
  GetJson("/api/pairs?status=finished", 400);
}

TEST_F(ServerFixture, PostLabelAppendsRecord) {
  Json stored;
  EXPECT_EQ(Post(R"({"train_id":"t0","synth_id":"s0","binary_label":"copy","labeler":"u1"})",
                 &stored),
            201);
  EXPECT_EQ(stored["binary_label"], "copy");
  EXPECT_GT(stored["timestamp"].get<std::int64_t>(), 0);
  const auto history = ReadLabels(Options().labels_path);
  ASSERT_EQ(history.size(), 1u);
  EXPECT_EQ(history[0].labeler, "u1");
  EXPECT_EQ(GetJson("/api/pairs?status=labeled").size(), 1u);
  EXPECT_EQ(GetJson("/api/pairs?status=pending").size(), 4u);
}

TEST_F(ServerFixture, PostValidation) {
  Json err;
  EXPECT_EQ(Post(R"({"train_id":"t0","synth_id":"s3","binary_label":"copy","labeler":"u1"})",
                 &err),
            404);
  EXPECT_TRUE(err.contains("error"));
  EXPECT_EQ(Post("not json"), 400);
  EXPECT_EQ(Post(R"({"train_id":"t0","synth_id":"s0","labeler":"u1"})"), 400);
  EXPECT_EQ(Post(R"({"train_id":"t0","synth_id":"s0","grade":"z","labeler":"u1"})"), 400);
  EXPECT_TRUE(ReadLabels(Options().labels_path).empty());
}

TEST_F(ServerFixture, PairDetail) {
  Post(R"({"train_id":"t0","synth_id":"s0","grade":"b","labeler":"u1","timestamp":10})");
  Post(R"({"train_id":"t0","synth_id":"s0","grade":"c","labeler":"u1","timestamp":20})");
  const Json p = GetJson("/api/pair/0");
  EXPECT_EQ(p["train_id"], "t0");
  EXPECT_EQ(p["train_image"]["url"], "/api/image/t0");
  EXPECT_EQ(p["train_image"]["slices"], 1);
  ASSERT_EQ(p["labels"].size(), 1u);
  EXPECT_EQ(p["labels"][0]["grade"], "c");
  GetJson("/api/pair/99", 404);
  GetJson("/api/pair/abc", 400);
}

TEST_F(ServerFixture, ImageEndpoint) {
  auto res = client_->Get("/api/image/t0");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
  const DecodedPng png = DecodePng(res->body);
  EXPECT_EQ(png.width, 16u);
  EXPECT_EQ(png.height, 16u);
  EXPECT_EQ(*std::max_element(png.pixels.begin(), png.pixels.end()), 255);

  res = client_->Get("/api/image/t0?slice=3");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = client_->Get("/api/image/t4?slice=5");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  res = client_->Get("/api/image/t4?slice=6");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  res = client_->Get("/api/image/nope");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  res = client_->Get("/api/image/..");
  ASSERT_TRUE(res);
  EXPECT_NE(res->status, 200);
}

TEST_F(ServerFixture, MetricsEndpoint) {
  Json m = GetJson("/api/metrics");
  EXPECT_EQ(m["n_labeled"], 0);
  EXPECT_TRUE(m["sensitivity"].is_null());
  Post(R"({"train_id":"t0","synth_id":"s0","binary_label":"copy","labeler":"u1"})");
  m = GetJson("/api/metrics");
  EXPECT_EQ(m["tp"], 1);
  EXPECT_EQ(m["sensitivity"], 1.0);
  EXPECT_TRUE(m["specificity"].is_null());
}

TEST_F(ServerFixture, LabelsSurviveRestart) {
  Post(R"({"train_id":"t2","synth_id":"s2","binary_label":"novel","labeler":"u1"})");
  Launch();
  EXPECT_EQ(GetJson("/api/session")["n_labeled"], 1);
  EXPECT_EQ(GetJson("/api/pairs?status=labeled")[0]["train_id"], "t2");
}

TEST_F(ServerFixture, RootServesPlaceholderOrUiDir) {
  auto res = client_->Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  std::filesystem::create_directories(dir_ / "ui");
  std::ofstream(dir_ / "ui" / "index.html") << "<html>ui</html>";
  ServerOptions opts;
  opts.ui_dir = dir_ / "ui";
  Launch(opts);
  res = client_->Get("/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->body, "<html>ui</html>");
}

}  // namespace
}  // namespace memaudit::review
