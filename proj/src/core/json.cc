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

#include "core/json.h"

#include <string_view>

#include "core/binary_io.h"
#include "core/error.h"

namespace memaudit {

Json ReadJsonFile(const std::filesystem::path& path) {
  const auto bytes = io::ReadFile(path);
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    Throw(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t UnsignedOr(const Json& j, const char* key,
                         std::uint64_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  Check(it->is_number_unsigned(), ErrorCode::kInvalidArgument,
        std::string(key) + " must be a non-negative integer");
  return it->get<std::uint64_t>();
}

void RejectUnknownKeys(const Json& j,
                       std::initializer_list<std::string_view> known,
                       std::string_view what) {
  Check(j.is_object(), ErrorCode::kInvalidArgument,
        std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    Check(ok, ErrorCode::kInvalidArgument,
          std::string(what) + ": unknown key '" + key + "'");
  }
}

void WriteJsonFile(const Json& j, const std::filesystem::path& path) {
  io::WriteTextFile(path, DumpJson(j));
}

}  // namespace memaudit
