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

#ifndef MEMAUDIT_CORE_LOG_H_
#define MEMAUDIT_CORE_LOG_H_

#include <functional>
#include <string>
#include <vector>

namespace memaudit {

using WarningHandler = std::function<void(const std::string&)>;

// Emits a warning through the installed handler (stderr by default).
void Warn(const std::string& message);

// Installs `handler` and returns the previous one. An empty handler restores
// the stderr default.
WarningHandler SetWarningHandler(WarningHandler handler);

// Collects warnings for the lifetime of the object. Used by tests.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_LOG_H_
