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

#include "review/server.h"

#include <httplib.h>

#include "core/error.h"
#include "core/tensor.h"
#include "review/png.h"

namespace memaudit::review {
namespace {

constexpr const char* kPlaceholder = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>memaudit review</title></head>
<body>
<h1>memaudit review</h1>
<p>No UI bundle was configured. Start the service with --ui-dir to serve one.</p>
<ul>
<li><a href="/api/session">/api/session</a></li>
<li><a href="/api/pairs?status=pending">/api/pairs?status=pending</a></li>
<li><a href="/api/metrics">/api/metrics</a></li>
</ul>
</body></html>
)";

void SendJson(httplib::Response& res, const Json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& msg) {
  Json j;
  j["error"] = msg;
  SendJson(res, j, status);
}

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kFormat:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    default:
      return 500;
  }
}

// Runs a handler, mapping toolkit errors to HTTP statuses.
template <typename Fn>
httplib::Server::Handler Guard(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      SendError(res, StatusFor(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      SendError(res, 400, e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, e.what());
    }
  };
}

std::size_t ParseIndex(const std::string& s, const char* what) {
  Check(!s.empty() && s.size() < 19 &&
            s.find_first_not_of("0123456789") == std::string::npos,
        ErrorCode::kInvalidArgument,
        std::string(what) + " must be a non-negative integer");
  return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace

ReviewServer::ReviewServer(std::shared_ptr<ReviewSession> session,
                           ServerOptions options)
    : session_(std::move(session)),
      options_(std::move(options)),
      http_(std::make_unique<httplib::Server>()) {
  Check(session_ != nullptr, ErrorCode::kInvalidArgument, "null session");
  Route();
}

ReviewServer::~ReviewServer() { Stop(); }

void ReviewServer::Route() {
  auto session = session_;
  http_->Get("/api/session",
             Guard([session](const httplib::Request&, httplib::Response& res) {
               SendJson(res, session->SessionJson());
             }));
  http_->Get("/api/pairs", Guard([session](const httplib::Request& req,
                                           httplib::Response& res) {
               const std::string status =
                   req.has_param("status") ? req.get_param_value("status") : "";
               SendJson(res, session->PairsJson(ParsePairStatus(status)));
             }));
  http_->Get(R"(/api/pair/([^/]+))",
             Guard([session](const httplib::Request& req,
                             httplib::Response& res) {
               SendJson(res,
                        session->PairJson(ParseIndex(req.matches[1], "index")));
             }));
  http_->Get(R"(/api/image/([^/]+))",
             Guard([session](const httplib::Request& req,
                             httplib::Response& res) {
               std::optional<std::size_t> slice;
               if (req.has_param("slice")) {
                 slice = ParseIndex(req.get_param_value("slice"), "slice");
               }
               const ImageTensor img =
                   ReadTensor(session->ImagePath(req.matches[1]));
               res.set_content(RenderPng(img, slice), "image/png");
             }));
  http_->Post("/api/labels", Guard([session](const httplib::Request& req,
                                             httplib::Response& res) {
                const LabelRecord stored =
                    session->AddLabel(LabelFromJson(Json::parse(req.body)));
                SendJson(res, ToJson(stored), 201);
              }));
  http_->Get("/api/metrics",
             Guard([session](const httplib::Request&, httplib::Response& res) {
               SendJson(res, session->MetricsJson());
             }));
  if (!options_.ui_dir.empty()) {
    Check(http_->set_mount_point("/", options_.ui_dir.string()),
          ErrorCode::kIo, "cannot serve UI from " + options_.ui_dir.string());
  } else {
    http_->Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholder, "text/html");
    });
  }
}

int ReviewServer::Start() {
  Check(!thread_.joinable(), ErrorCode::kInvalidArgument,
        "server already started");
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.host);
  } else {
    port_ = http_->bind_to_port(options_.host, options_.port)
                ? options_.port
                : -1;
  }
  Check(port_ > 0, ErrorCode::kIo,
        "cannot bind " + options_.host + ":" + std::to_string(options_.port));
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void ReviewServer::Wait() {
  if (thread_.joinable()) thread_.join();
}

void ReviewServer::Stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace memaudit::review
