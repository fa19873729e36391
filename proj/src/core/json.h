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

#ifndef MEMAUDIT_CORE_JSON_H_
#define MEMAUDIT_CORE_JSON_H_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace memaudit {

// Insertion-ordered JSON for everything written to disk, so output key order
// is stable and readable. Canonical hashing uses nlohmann::json (sorted).
using Json = nlohmann::ordered_json;

Json ReadJsonFile(const std::filesystem::path& path);
// Pretty-printed with two-space indent and a trailing newline.
void WriteJsonFile(const Json& j, const std::filesystem::path& path);
std::string DumpJson(const Json& j);

// Value of an unsigned integer field, or `fallback` when absent. Negative or
// fractional numbers raise kInvalidArgument.
std::uint64_t UnsignedOr(const Json& j, const char* key,
                         std::uint64_t fallback);

// Throws kInvalidArgument naming the first key of `j` not in `known`.
void RejectUnknownKeys(const Json& j,
                       std::initializer_list<std::string_view> known,
                       std::string_view what);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_JSON_H_
