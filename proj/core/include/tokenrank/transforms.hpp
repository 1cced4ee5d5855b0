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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tokenrank/image.hpp"

namespace tokenrank {

/// Black border added on every side of every transformed image.
inline constexpr std::size_t kTransformBorder = 20;

enum class TransformKind {
    Contrast,
    Brightness,
    Rotation,
    Downscale,
    ScaleBackground,
    Blur,
    Tiling,
    Noise,
    Clutter,
    Occlusion,
};

inline constexpr std::array<TransformKind, 10> kAllTransformKinds = {
    TransformKind::Contrast, TransformKind::Brightness,      TransformKind::Rotation, TransformKind::Downscale,
    TransformKind::ScaleBackground, TransformKind::Blur,     TransformKind::Tiling,   TransformKind::Noise,
    TransformKind::Clutter,  TransformKind::Occlusion,
};

std::string_view
to_string(TransformKind kind);

/// Accepts the names printed by to_string (scale_bg for ScaleBackground).
/// Errors: InvalidArgument.
TransformKind
parse_transform_kind(std::string_view name);

/// Closed factor interval for a kind. `start` is the mildest setting and
/// `end` the harshest; for downscale start > end.
struct FactorRange {
    double start;
    double end;
    bool integral = false;
    bool geometric = false;

    double
    lo() const noexcept {
        return start < end ? start : end;
    }

    double
    hi() const noexcept {
        return start < end ? end : start;
    }
};

FactorRange
factor_range(TransformKind kind);

/// True for kinds that draw from aux_image.
bool
needs_aux_image(TransformKind kind);

struct TransformSpec {
    TransformKind kind = TransformKind::Contrast;
    double factor = 1.0;
    /// Background / distractor source for tiling, clutter and scale_bg.
    std::optional<Image> aux_image;
    std::uint64_t seed = 0;
};

/// Applies the perturbation, then the black border. Deterministic for a given
/// (image, spec). Factor meaning per kind:
///   contrast    blend factor around the mean luminance
///   brightness  multiplicative gain
///   rotation    degrees counter-clockwise, canvas expanded to fit
///   downscale   scale; the shrunk content sits top-left on the padded canvas
///   scale_bg    r; content scaled by (1 - r) and centred on the background
///   blur        Gaussian sigma in pixels
///   tiling      number of 1/6-area cells replaced by distractor patches
///   noise       sigma of additive Gaussian noise, relative to 255
///   clutter     number of 1/36-area distractor patches around the object
///   occlusion   fraction of pixels covered by three black discs
/// Errors: FactorOutOfRange, MissingAuxImage.
Image
apply_transform(const Image& image, const TransformSpec& spec);

/// Separable Gaussian, kernel radius ceil(3 sigma), replicated border.
/// sigma == 0 returns the input unchanged.
Image
gaussian_blur(const Image& image, double sigma);

/// Nearest-neighbour rotation about the centre into an expanded canvas.
/// Multiples of 90 degrees are exact pixel permutations.
Image
rotate_nearest(const Image& image, double degrees);

/// n factors from the mildest to the harshest setting: geometric for contrast
/// and brightness, linear otherwise; endpoints are exact and integral kinds
/// are rounded. Errors: InvalidArgument when n < 2.
std::vector<double>
factor_grid(TransformKind kind, std::size_t n);

}  // namespace tokenrank
