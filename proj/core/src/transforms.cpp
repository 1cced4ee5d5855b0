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

#include "tokenrank/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tokenrank/error.hpp"

namespace tokenrank {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t C = Image::kChannels;

std::uint8_t
clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

template <typename Fn>
Image
map_pixels(const Image& image, Fn&& fn) {
    Image out = image;
    for (auto& v : out.pixels()) {
        v = fn(v);
    }
    return out;
}

// Integer luma, ITU-R 601 weights.
long
mean_luma(const Image& image) {
    std::uint64_t sum = 0;
    const std::size_t n = image.width() * image.height();
    for (std::size_t i = 0; i < n; ++i) {
        const auto* p = image.pixels().data() + i * C;
        sum += (299u * p[0] + 587u * p[1] + 114u * p[2] + 500u) / 1000u;
    }
    return static_cast<long>((sum + n / 2) / n);
}

Image
adjust_contrast(const Image& image, double f) {
    const double m = static_cast<double>(mean_luma(image));
    return map_pixels(image, [&](std::uint8_t v) { return clamp_u8(m + f * (v - m)); });
}

Image
adjust_brightness(const Image& image, double f) {
    return map_pixels(image, [&](std::uint8_t v) { return clamp_u8(f * v); });
}

Image
add_noise(const Image& image, double sigma, std::uint64_t seed) {
    if (sigma == 0.0) {
        return image;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    return map_pixels(image, [&](std::uint8_t v) { return clamp_u8(v + 255.0 * sigma * z(rng)); });
}

std::size_t
scaled(std::size_t len, double s) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(len) * s)));
}

// Cell boundaries of an n-way split of len pixels.
std::size_t
edge(std::size_t len, std::size_t i, std::size_t n) {
    return len * i / n;
}

Image
downscale(const Image& image, double s) {
    Image canvas(image.width() + 2 * kTransformBorder, image.height() + 2 * kTransformBorder);
    paste(canvas, resize_area(image, scaled(image.width(), s), scaled(image.height(), s)), kTransformBorder,
          kTransformBorder);
    return canvas;
}

Image
scale_on_background(const Image& image, double r, const Image& aux) {
    Image out = resize_area(aux, image.width(), image.height());
    const double s = 1.0 - r;
    const auto w = static_cast<std::size_t>(std::lround(image.width() * s));
    const auto h = static_cast<std::size_t>(std::lround(image.height() * s));
    if (w == 0 || h == 0) {
        return out;
    }
    paste(out, resize_area(image, w, h), (image.width() - w) / 2, (image.height() - h) / 2);
    return out;
}

// Random crop of `w` x `h` from `src`, which must be at least that large.
Image
random_patch(const Image& src, std::size_t w, std::size_t h, std::mt19937_64& rng) {
    const std::size_t x = src.width() == w ? 0 : rng() % (src.width() - w + 1);
    const std::size_t y = src.height() == h ? 0 : rng() % (src.height() - h + 1);
    return crop(src, x, y, w, h);
}

Image
tile(const Image& image, std::size_t patches, const Image& aux, std::uint64_t seed) {
    constexpr std::size_t kCols = 3;
    constexpr std::size_t kRows = 2;
    std::mt19937_64 rng(seed);
    const Image source = resize_area(aux, image.width(), image.height());
    std::vector<std::size_t> cells(kCols * kRows);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);

    Image out = image;
    for (std::size_t i = 0; i < patches; ++i) {
        const std::size_t cx = cells[i] % kCols;
        const std::size_t cy = cells[i] / kCols;
        const std::size_t x0 = edge(image.width(), cx, kCols);
        const std::size_t y0 = edge(image.height(), cy, kRows);
        const std::size_t w = edge(image.width(), cx + 1, kCols) - x0;
        const std::size_t h = edge(image.height(), cy + 1, kRows) - y0;
        if (w == 0 || h == 0) {
            continue;
        }
        paste(out, random_patch(source, w, h, rng), x0, y0);
    }
    return out;
}

Image
clutter(const Image& image, std::size_t patches, const Image& aux, std::uint64_t seed) {
    constexpr std::size_t kGrid = 6;
    std::mt19937_64 rng(seed);
    const std::size_t W = image.width();
    const std::size_t H = image.height();
    const Image bg = resize_area(aux, W, H);
    Image out = bg;

    // Object occupies the central 2x2 block of the 6x6 grid.
    const std::size_t ox = edge(W, 2, kGrid);
    const std::size_t oy = edge(H, 2, kGrid);
    const std::size_t ow = edge(W, 4, kGrid) - ox;
    const std::size_t oh = edge(H, 4, kGrid) - oy;
    if (ow > 0 && oh > 0) {
        paste(out, resize_area(image, ow, oh), ox, oy);
    }

    std::vector<std::size_t> free_cells;
    for (std::size_t c = 0; c < kGrid * kGrid; ++c) {
        const std::size_t cx = c % kGrid;
        const std::size_t cy = c / kGrid;
        if ((cx == 2 || cx == 3) && (cy == 2 || cy == 3)) {
            continue;
        }
        free_cells.push_back(c);
    }
    std::shuffle(free_cells.begin(), free_cells.end(), rng);

    // Distractors are cut from a point-mirrored copy of the background.
    Image mirrored(W, H);
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
            std::copy_n(bg.at(W - 1 - x, H - 1 - y), C, mirrored.at(x, y));
        }
    }
    for (std::size_t i = 0; i < patches; ++i) {
        const std::size_t cx = free_cells[i] % kGrid;
        const std::size_t cy = free_cells[i] / kGrid;
        const std::size_t x0 = edge(W, cx, kGrid);
        const std::size_t y0 = edge(H, cy, kGrid);
        const std::size_t w = edge(W, cx + 1, kGrid) - x0;
        const std::size_t h = edge(H, cy + 1, kGrid) - y0;
        if (w == 0 || h == 0) {
            continue;
        }
        paste(out, random_patch(mirrored, w, h, rng), x0, y0);
    }
    return out;
}

struct Disc {
    double x;
    double y;
};

std::size_t
covered_pixels(std::size_t W, std::size_t H, const std::vector<Disc>& discs, double r) {
    const double r2 = r * r;
    std::size_t n = 0;
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
            const double px = static_cast<double>(x) + 0.5;
            const double py = static_cast<double>(y) + 0.5;
            for (const auto& d : discs) {
                if ((px - d.x) * (px - d.x) + (py - d.y) * (py - d.y) <= r2) {
                    ++n;
                    break;
                }
            }
        }
    }
    return n;
}

Image
occlude(const Image& image, double coverage, std::uint64_t seed) {
    if (coverage <= 0.0) {
        return image;
    }
    const std::size_t W = image.width();
    const std::size_t H = image.height();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, static_cast<double>(W));
    std::uniform_real_distribution<double> uy(0.0, static_cast<double>(H));
    std::vector<Disc> discs(3);
    for (auto& d : discs) {
        d.x = ux(rng);
        d.y = uy(rng);
    }
    const double target = coverage * static_cast<double>(W * H);

    // Smallest integer radius whose union of discs reaches the target.
    std::size_t lo = 0;
    auto hi = static_cast<std::size_t>(std::ceil(std::hypot(W, H))) + 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(covered_pixels(W, H, discs, static_cast<double>(mid))) >= target) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const double r2 = static_cast<double>(lo) * static_cast<double>(lo);
    Image out = image;
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
            const double px = static_cast<double>(x) + 0.5;
            const double py = static_cast<double>(y) + 0.5;
            for (const auto& d : discs) {
                if ((px - d.x) * (px - d.x) + (py - d.y) * (py - d.y) <= r2) {
                    std::fill_n(out.at(x, y), C, std::uint8_t{0});
                    break;
                }
            }
        }
    }
    return out;
}

void
check_factor(TransformKind kind, double factor) {
    const auto range = factor_range(kind);
    if (!std::isfinite(factor) || factor < range.lo() || factor > range.hi()) {
        fail(ErrorCode::FactorOutOfRange, std::string(to_string(kind)) + " factor " + std::to_string(factor) +
                                              " outside [" + std::to_string(range.lo()) + ", " +
                                              std::to_string(range.hi()) + "]");
    }
    if (range.integral && factor != std::floor(factor)) {
        fail(ErrorCode::FactorOutOfRange, std::string(to_string(kind)) + " factor must be an integer");
    }
}

}  // namespace

std::string_view
to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::Contrast: return "contrast";
        case TransformKind::Brightness: return "brightness";
        case TransformKind::Rotation: return "rotation";
        case TransformKind::Downscale: return "downscale";
        case TransformKind::ScaleBackground: return "scale_bg";
        case TransformKind::Blur: return "blur";
        case TransformKind::Tiling: return "tiling";
        case TransformKind::Noise: return "noise";
        case TransformKind::Clutter: return "clutter";
        case TransformKind::Occlusion: return "occlusion";
    }
    return "unknown";
}

TransformKind
parse_transform_kind(std::string_view name) {
    for (auto kind : kAllTransformKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    fail(ErrorCode::InvalidArgument, "unknown transform kind '" + std::string(name) + "'");
}

FactorRange
factor_range(TransformKind kind) {
    switch (kind) {
        case TransformKind::Contrast:
        case TransformKind::Brightness: return {0.05, 20.0, false, true};
        case TransformKind::Rotation: return {0.0, 180.0};
        case TransformKind::Downscale: return {0.5, 0.05};
        case TransformKind::ScaleBackground: return {0.0, 1.0};
        case TransformKind::Blur: return {1.0, 15.0};
        case TransformKind::Tiling: return {1.0, 6.0, true};
        case TransformKind::Noise: return {0.0, 1.0};
        case TransformKind::Clutter: return {1.0, 28.0, true};
        case TransformKind::Occlusion: return {0.0, 1.0};
    }
    return {0.0, 1.0};
}

bool
needs_aux_image(TransformKind kind) {
    return kind == TransformKind::Tiling || kind == TransformKind::Clutter || kind == TransformKind::ScaleBackground;
}

Image
gaussian_blur(const Image& image, double sigma) {
    if (sigma < 0.0 || !std::isfinite(sigma)) {
        fail(ErrorCode::InvalidArgument, "blur sigma must be finite and non-negative");
    }
    if (sigma == 0.0) {
        return image;
    }
    const auto radius = static_cast<long>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (long i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = w;
        total += w;
    }
    for (auto& w : kernel) {
        w /= total;
    }

    const auto W = static_cast<long>(image.width());
    const auto H = static_cast<long>(image.height());
    std::vector<double> tmp(image.pixels().size());
    for (long y = 0; y < H; ++y) {
        for (long x = 0; x < W; ++x) {
            double acc[C] = {0.0, 0.0, 0.0};
            for (long k = -radius; k <= radius; ++k) {
                const long sx = std::clamp(x + k, 0L, W - 1);
                const auto* p = image.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(y));
                const double w = kernel[static_cast<std::size_t>(k + radius)];
                for (std::size_t c = 0; c < C; ++c) {
                    acc[c] += w * p[c];
                }
            }
            std::copy_n(acc, C, &tmp[static_cast<std::size_t>(y * W + x) * C]);
        }
    }
    Image out(image.width(), image.height());
    for (long y = 0; y < H; ++y) {
        for (long x = 0; x < W; ++x) {
            double acc[C] = {0.0, 0.0, 0.0};
            for (long k = -radius; k <= radius; ++k) {
                const long sy = std::clamp(y + k, 0L, H - 1);
                const double* p = &tmp[static_cast<std::size_t>(sy * W + x) * C];
                const double w = kernel[static_cast<std::size_t>(k + radius)];
                for (std::size_t c = 0; c < C; ++c) {
                    acc[c] += w * p[c];
                }
            }
            auto* o = out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
            for (std::size_t c = 0; c < C; ++c) {
                o[c] = clamp_u8(acc[c]);
            }
        }
    }
    return out;
}

Image
rotate_nearest(const Image& image, double degrees) {
    const std::size_t W = image.width();
    const std::size_t H = image.height();
    double turns = std::fmod(degrees, 360.0);
    if (turns < 0.0) {
        turns += 360.0;
    }
    if (turns == 0.0) {
        return image;
    }
    if (turns == 180.0) {
        Image out(W, H);
        for (std::size_t y = 0; y < H; ++y) {
            for (std::size_t x = 0; x < W; ++x) {
                std::copy_n(image.at(W - 1 - x, H - 1 - y), C, out.at(x, y));
            }
        }
        return out;
    }
    if (turns == 90.0 || turns == 270.0) {
        Image out(H, W);
        for (std::size_t y = 0; y < W; ++y) {
            for (std::size_t x = 0; x < H; ++x) {
                const auto* src = turns == 90.0 ? image.at(W - 1 - y, x) : image.at(y, H - 1 - x);
                std::copy_n(src, C, out.at(x, y));
            }
        }
        return out;
    }

    const double t = turns * kPi / 180.0;
    const double c = std::cos(t);
    const double s = std::sin(t);
    const auto fit = [](double v) { return static_cast<std::size_t>(std::max(1.0, std::ceil(v - 1e-9))); };
    const std::size_t OW = fit(std::abs(W * c) + std::abs(H * s));
    const std::size_t OH = fit(std::abs(W * s) + std::abs(H * c));
    Image out(OW, OH);
    for (std::size_t oy = 0; oy < OH; ++oy) {
        for (std::size_t ox = 0; ox < OW; ++ox) {
            const double u = static_cast<double>(ox) + 0.5 - static_cast<double>(OW) / 2.0;
            const double v = static_cast<double>(oy) + 0.5 - static_cast<double>(OH) / 2.0;
            const double sx = u * c - v * s + static_cast<double>(W) / 2.0;
            const double sy = u * s + v * c + static_cast<double>(H) / 2.0;
            if (sx < 0.0 || sy < 0.0 || sx >= static_cast<double>(W) || sy >= static_cast<double>(H)) {
                continue;
            }
            std::copy_n(image.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)), C, out.at(ox, oy));
        }
    }
    return out;
}

Image
apply_transform(const Image& image, const TransformSpec& spec) {
    if (image.empty()) {
        fail(ErrorCode::InvalidArgument, "cannot transform an empty image");
    }
    check_factor(spec.kind, spec.factor);
    if (needs_aux_image(spec.kind) && (!spec.aux_image || spec.aux_image->empty())) {
        fail(ErrorCode::MissingAuxImage, std::string(to_string(spec.kind)) + " needs an auxiliary image");
    }
    const double f = spec.factor;
    switch (spec.kind) {
        case TransformKind::Contrast: return pad(adjust_contrast(image, f), kTransformBorder);
        case TransformKind::Brightness: return pad(adjust_brightness(image, f), kTransformBorder);
        case TransformKind::Rotation: return pad(rotate_nearest(image, f), kTransformBorder);
        case TransformKind::Downscale: return downscale(image, f);
        case TransformKind::ScaleBackground:
            return pad(scale_on_background(image, f, *spec.aux_image), kTransformBorder);
        case TransformKind::Blur: return pad(gaussian_blur(image, f), kTransformBorder);
        case TransformKind::Tiling:
            return pad(tile(image, static_cast<std::size_t>(f), *spec.aux_image, spec.seed), kTransformBorder);
        case TransformKind::Noise: return pad(add_noise(image, f, spec.seed), kTransformBorder);
        case TransformKind::Clutter:
            return pad(clutter(image, static_cast<std::size_t>(f), *spec.aux_image, spec.seed), kTransformBorder);
        case TransformKind::Occlusion: return pad(occlude(image, f, spec.seed), kTransformBorder);
    }
    return pad(image, kTransformBorder);
}

std::vector<double>
factor_grid(TransformKind kind, std::size_t n) {
    if (n < 2) {
        fail(ErrorCode::InvalidArgument, "factor grid needs at least 2 points");
    }
    const auto range = factor_range(kind);
    const double a = range.start;
    const double b = range.end;
    const double last = static_cast<double>(n - 1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / last;
        double v = range.geometric ? a * std::pow(b / a, t) : (a * (last - i) + b * static_cast<double>(i)) / last;
        if (range.integral) {
            v = std::round(v);
        }
        out[i] = v;
    }
    out.front() = a;
    out.back() = b;
    return out;
}

}  // namespace tokenrank
