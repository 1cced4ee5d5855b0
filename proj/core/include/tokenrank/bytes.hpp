// Copyright 2026-present the tokenrank project
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

#pragma once

// Little-endian encoding helpers shared by the binary file formats.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokenrank/error.hpp"

namespace tokenrank {

class ByteWriter {
public:
    void
    u8(std::uint8_t v) {
        buf_.push_back(v);
    }

    void
    u16(std::uint16_t v) {
        put_le(v, 2);
    }

    void
    u32(std::uint32_t v) {
        put_le(v, 4);
    }

    void
    u64(std::uint64_t v) {
        put_le(v, 8);
    }

    void
    f32(float v) {
        u32(std::bit_cast<std::uint32_t>(v));
    }

    void
    bytes(std::span<const std::uint8_t> data) {
        buf_.insert(buf_.end(), data.begin(), data.end());
    }

    void
    raw(std::string_view s) {
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    /// u32 length followed by the bytes.
    void
    str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s);
    }

    std::size_t
    size() const noexcept {
        return buf_.size();
    }

    const std::vector<std::uint8_t>&
    buffer() const noexcept {
        return buf_;
    }

    std::vector<std::uint8_t>
    take() noexcept {
        return std::move(buf_);
    }

    void
    clear() noexcept {
        buf_.clear();
    }

private:
    void
    put_le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    std::vector<std::uint8_t> buf_;
};

/// Bounds-checked reader; running past the end raises `short_code`.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data, ErrorCode short_code = ErrorCode::Corrupt)
        : data_(data), short_code_(short_code) {
    }

    std::uint8_t
    u8() {
        return static_cast<std::uint8_t>(get_le(1));
    }

    std::uint16_t
    u16() {
        return static_cast<std::uint16_t>(get_le(2));
    }

    std::uint32_t
    u32() {
        return static_cast<std::uint32_t>(get_le(4));
    }

    std::uint64_t
    u64() {
        return get_le(8);
    }

    float
    f32() {
        return std::bit_cast<float>(u32());
    }

    std::span<const std::uint8_t>
    bytes(std::size_t n) {
        need(n);
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::string_view
    raw(std::size_t n) {
        auto b = bytes(n);
        return {reinterpret_cast<const char*>(b.data()), b.size()};
    }

    std::string
    str(std::size_t max_len = 1 << 20) {
        const auto n = u32();
        if (n > max_len) {
            fail(short_code_, "string length " + std::to_string(n) + " exceeds limit");
        }
        return std::string(raw(n));
    }

    std::size_t
    position() const noexcept {
        return pos_;
    }

    std::size_t
    remaining() const noexcept {
        return data_.size() - pos_;
    }

    void
    need(std::size_t n) const {
        if (n > remaining()) {
            fail(short_code_, "unexpected end of data");
        }
    }

private:
    std::uint64_t
    get_le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    ErrorCode short_code_;
};

std::uint32_t
crc32(std::span<const std::uint8_t> data, std::uint32_t running = 0);

std::vector<std::uint8_t>
read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void
write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace tokenrank
