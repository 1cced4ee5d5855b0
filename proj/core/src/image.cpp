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

#include "tokenrank/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tokenrank/bytes.hpp"
#include "tokenrank/error.hpp"

namespace tokenrank {

namespace {

struct Tap {
    std::size_t src;
    double weight;
};

// For each output coordinate, the source samples it covers and their share.
std::vector<std::vector<Tap>>
area_taps(std::size_t src_len, std::size_t dst_len) {
    std::vector<std::vector<Tap>> taps(dst_len);
    const double scale = static_cast<double>(src_len) / static_cast<double>(dst_len);
    for (std::size_t o = 0; o < dst_len; ++o) {
        const double lo = static_cast<double>(o) * scale;
        const double hi = static_cast<double>(o + 1) * scale;
        auto first = static_cast<std::size_t>(std::floor(lo));
        auto last = std::min(src_len, static_cast<std::size_t>(std::ceil(hi)));
        for (std::size_t s = first; s < last; ++s) {
            const double overlap = std::min(hi, static_cast<double>(s + 1)) - std::max(lo, static_cast<double>(s));
            if (overlap > 0.0) {
                taps[o].push_back({s, overlap / scale});
            }
        }
    }
    return taps;
}

std::uint8_t
to_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

Image::Image(std::size_t width, std::size_t height) : width_(width), height_(height) {
    if (width == 0 || height == 0) {
        fail(ErrorCode::InvalidArgument, "image dimensions must be positive");
    }
    pixels_.assign(width * height * kChannels, 0);
}

Image::Image(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) {
        fail(ErrorCode::InvalidArgument, "image dimensions must be positive");
    }
    if (pixels_.size() != width * height * kChannels) {
        fail(ErrorCode::InvalidArgument, "pixel buffer holds " + std::to_string(pixels_.size()) + " bytes, expected " +
                                             std::to_string(width * height * kChannels));
    }
}

Image
crop(const Image& image, std::size_t x, std::size_t y, std::size_t w, std::size_t h) {
    if (w == 0 || h == 0 || x + w > image.width() || y + h > image.height()) {
        fail(ErrorCode::OutOfRange, "crop window outside the image");
    }
    Image out(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        std::memcpy(out.at(0, r), image.at(x, y + r), w * Image::kChannels);
    }
    return out;
}

void
paste(Image& dst, const Image& src, std::size_t x, std::size_t y) {
    if (x >= dst.width() || y >= dst.height()) {
        return;
    }
    const std::size_t w = std::min(src.width(), dst.width() - x);
    const std::size_t h = std::min(src.height(), dst.height() - y);
    for (std::size_t r = 0; r < h; ++r) {
        std::memcpy(dst.at(x, y + r), src.at(0, r), w * Image::kChannels);
    }
}

Image
resize_area(const Image& image, std::size_t width, std::size_t height) {
    if (width == 0 || height == 0) {
        fail(ErrorCode::InvalidArgument, "resize target must be positive");
    }
    if (width == image.width() && height == image.height()) {
        return image;
    }
    const auto xt = area_taps(image.width(), width);
    const auto yt = area_taps(image.height(), height);
    constexpr std::size_t C = Image::kChannels;

    std::vector<double> rows(image.height() * width * C, 0.0);
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            double* acc = &rows[(y * width + x) * C];
            for (const auto& t : xt[x]) {
                const auto* p = image.at(t.src, y);
                for (std::size_t c = 0; c < C; ++c) {
                    acc[c] += t.weight * p[c];
                }
            }
        }
    }
    Image out(width, height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            double acc[C] = {0.0, 0.0, 0.0};
            for (const auto& t : yt[y]) {
                const double* p = &rows[(t.src * width + x) * C];
                for (std::size_t c = 0; c < C; ++c) {
                    acc[c] += t.weight * p[c];
                }
            }
            auto* o = out.at(x, y);
            for (std::size_t c = 0; c < C; ++c) {
                o[c] = to_u8(acc[c]);
            }
        }
    }
    return out;
}

Image
pad(const Image& image, std::size_t border) {
    Image out(image.width() + 2 * border, image.height() + 2 * border);
    paste(out, image, border, border);
    return out;
}

Image
decode_png(std::span<const std::uint8_t> bytes) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
        fail(ErrorCode::Corrupt, std::string("png: ") + img.message);
    }
    img.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, pixels.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        fail(ErrorCode::Corrupt, "png: " + msg);
    }
    return Image(img.width, img.height, std::move(pixels));
}

std::vector<std::uint8_t>
encode_png(const Image& image) {
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width());
    img.height = static_cast<png_uint_32>(image.height());
    img.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.pixels().data(), 0, nullptr)) {
        fail(ErrorCode::IoFailure, std::string("png: ") + img.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.pixels().data(), 0, nullptr)) {
        fail(ErrorCode::IoFailure, std::string("png: ") + img.message);
    }
    out.resize(size);
    return out;
}

Image
read_png(const std::filesystem::path& path) {
    return decode_png(read_file(path));
}

void
write_png(const std::filesystem::path& path, const Image& image) {
    write_file_atomic(path, encode_png(image));
}

}  // namespace tokenrank
