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

#include "core/binary_io.h"

#include <fstream>
#include <iterator>

namespace memaudit::io {

std::vector<unsigned char> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) Throw(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

void WriteFile(const std::filesystem::path& path,
               std::span<const unsigned char> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Throw(ErrorCode::kIo, "cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) Throw(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Throw(ErrorCode::kIo, "rename failed: " + path.string());
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  WriteFile(path, std::span(reinterpret_cast<const unsigned char*>(text.data()),
                            text.size()));
}

}  // namespace memaudit::io
