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

#ifndef MEMAUDIT_REVIEW_SERVER_H_
#define MEMAUDIT_REVIEW_SERVER_H_

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "review/session.h"

namespace httplib {
class Server;
}

namespace memaudit::review {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  // Static UI assets served at /. Empty serves a placeholder page.
  std::filesystem::path ui_dir;
};

// HTTP front end of a ReviewSession.
//
//   GET  /api/session
//   GET  /api/pairs?status=pending|labeled|all
//   GET  /api/pair/{i}
//   GET  /api/image/{id}[?slice=k]     8-bit grayscale PNG
//   POST /api/labels                   201 with the stored record
//   GET  /api/metrics
//
// Errors are JSON {"error": message} with 400 for bad input, 404 for unknown
// pairs or images and 500 otherwise.
class ReviewServer {
 public:
  ReviewServer(std::shared_ptr<ReviewSession> session, ServerOptions options);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds and serves on a background thread. Returns the bound port. Throws
  // kIo if the port cannot be bound.
  int Start();
  // Blocks until Stop is called from another thread.
  void Wait();
  void Stop();

  int port() const { return port_; }

 private:
  void Route();

  std::shared_ptr<ReviewSession> session_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace memaudit::review

#endif  // MEMAUDIT_REVIEW_SERVER_H_
