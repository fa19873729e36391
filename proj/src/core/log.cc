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

#include "core/log.h"

#include <cstdio>
#include <mutex>
#include <utility>

namespace memaudit {
namespace {

std::mutex& HandlerMutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& Handler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

void Warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  if (Handler()) {
    Handler()(message);
  } else {
    std::fprintf(stderr, "memaudit: warning: %s\n", message.c_str());
  }
}

WarningHandler SetWarningHandler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  return std::exchange(Handler(), std::move(handler));
}

ScopedWarningCapture::ScopedWarningCapture() {
  previous_ = SetWarningHandler(
      [this](const std::string& m) { messages_.push_back(m); });
}

ScopedWarningCapture::~ScopedWarningCapture() {
  SetWarningHandler(std::move(previous_));
}

}  // namespace memaudit
