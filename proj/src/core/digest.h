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

#ifndef MEMAUDIT_CORE_DIGEST_H_
#define MEMAUDIT_CORE_DIGEST_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace memaudit {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::span<const unsigned char> bytes);
std::string Sha256Hex(std::string_view text);
std::string FileSha256Hex(const std::filesystem::path& path);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_DIGEST_H_
