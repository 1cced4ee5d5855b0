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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tokenrank {

/// Interleaved 8-bit RGB raster, row-major, top row first.
class Image {
public:
    static constexpr std::size_t kChannels = 3;

    Image() = default;

    /// All-black image. Errors: InvalidArgument on a zero dimension.
    Image(std::size_t width, std::size_t height);

    /// Errors: InvalidArgument when pixels.size() != width * height * 3.
    Image(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::size_t
    width() const noexcept {
        return width_;
    }

    std::size_t
    height() const noexcept {
        return height_;
    }

    bool
    empty() const noexcept {
        return pixels_.empty();
    }

    std::span<const std::uint8_t>
    pixels() const noexcept {
        return pixels_;
    }

    std::span<std::uint8_t>
    pixels() noexcept {
        return pixels_;
    }

    std::uint8_t*
    at(std::size_t x, std::size_t y) noexcept {
        return pixels_.data() + (y * width_ + x) * kChannels;
    }

    const std::uint8_t*
    at(std::size_t x, std::size_t y) const noexcept {
        return pixels_.data() + (y * width_ + x) * kChannels;
    }

    friend bool
    operator==(const Image&, const Image&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Copies the w x h window at (x, y). Errors: OutOfRange.
Image
crop(const Image& image, std::size_t x, std::size_t y, std::size_t w, std::size_t h);

/// Writes `src` into `dst` with its top-left corner at (x, y); parts falling
/// outside `dst` are clipped.
void
paste(Image& dst, const Image& src, std::size_t x, std::size_t y);

/// Area-weighted resampling: every output pixel is the exact coverage-weighted
/// mean of the source region it maps to. Works for both shrinking and
/// enlarging. Errors: InvalidArgument on a zero target dimension.
Image
resize_area(const Image& image, std::size_t width, std::size_t height);

/// Adds a black border of `border` pixels on every side.
Image
pad(const Image& image, std::size_t border);

/// PNG codec (8-bit RGB; other layouts are converted on read).
/// Errors: IoFailure, Corrupt.
Image
decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t>
encode_png(const Image& image);

Image
read_png(const std::filesystem::path& path);

/// Atomic write (temp file + rename).
void
write_png(const std::filesystem::path& path, const Image& image);

}  // namespace tokenrank
