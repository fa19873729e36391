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

#ifndef MEMAUDIT_CORE_ERROR_H_
#define MEMAUDIT_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace memaudit {

// Failure classes. The values line up with the CLI exit codes where one
// exists; kFormat is reported as an IO-class failure by the CLI.
enum class ErrorCode {
  kInvalidArgument = 2,
  kIo = 3,
  kNumerical = 4,
  kFormat = 5,
  kNotFound = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Throw(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Check(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) Throw(code, what);
}

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_ERROR_H_
