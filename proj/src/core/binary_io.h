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

#ifndef MEMAUDIT_CORE_BINARY_IO_H_
#define MEMAUDIT_CORE_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/error.h"

namespace memaudit::io {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

// Little-endian byte sink.
class Writer {
 public:
  void Bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U16(std::uint16_t v) { Le(v); }
  void U32(std::uint32_t v) { Le(v); }
  void U64(std::uint64_t v) { Le(v); }
  void F32(float v) { Le(std::bit_cast<std::uint32_t>(v)); }

  std::vector<unsigned char>& buffer() { return buf_; }

 private:
  template <typename T>
  void Le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<unsigned char>(v >> (8 * i)));
    }
  }
  std::vector<unsigned char> buf_;
};

// Little-endian byte source over a borrowed buffer. Truncation throws
// kFormat with `what` as context.
class Reader {
 public:
  Reader(std::span<const unsigned char> data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::string_view Bytes(std::size_t n) {
    Need(n);
    std::string_view s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::uint8_t U8() { return Le<std::uint8_t>(); }
  std::uint16_t U16() { return Le<std::uint16_t>(); }
  std::uint32_t U32() { return Le<std::uint32_t>(); }
  std::uint64_t U64() { return Le<std::uint64_t>(); }
  float F32() { return std::bit_cast<float>(Le<std::uint32_t>()); }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(std::size_t n) {
    if (remaining() < n) Throw(ErrorCode::kFormat, what_ + ": truncated file");
  }
  template <typename T>
  T Le() {
    Need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(data_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }

  std::span<const unsigned char> data_;
  std::size_t pos_ = 0;
  std::string what_;
};

std::vector<unsigned char> ReadFile(const std::filesystem::path& path);
// Writes via a temporary sibling and rename so readers never see a partial
// file.
void WriteFile(const std::filesystem::path& path,
               std::span<const unsigned char> bytes);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace memaudit::io

#endif  // MEMAUDIT_CORE_BINARY_IO_H_
