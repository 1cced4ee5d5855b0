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

#include "tokenrank/half.hpp"

#include <bit>

namespace tokenrank {

std::uint16_t
float_to_half(float value) noexcept {
    const auto bits = std::bit_cast<std::uint32_t>(value);
    const auto sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000U);
    const std::uint32_t exponent = (bits >> 23) & 0xFFU;
    std::uint32_t mantissa = bits & 0x7FFFFFU;

    if (exponent == 0xFF) {
        if (mantissa != 0) {
            return static_cast<std::uint16_t>(sign | 0x7E00U);
        }
        return static_cast<std::uint16_t>(sign | 0x7C00U);
    }

    const int unbiased = static_cast<int>(exponent) - 127;
    if (unbiased > 15) {
        return static_cast<std::uint16_t>(sign | 0x7C00U);
    }

    if (unbiased >= -14) {
        // normal half; 13 mantissa bits are dropped
        std::uint32_t half = (static_cast<std::uint32_t>(unbiased + 15) << 10) | (mantissa >> 13);
        const std::uint32_t rest = mantissa & 0x1FFFU;
        if (rest > 0x1000U || (rest == 0x1000U && (half & 1U) != 0)) {
            ++half;  // may carry into the exponent, up to infinity
        }
        return static_cast<std::uint16_t>(sign | half);
    }

    // subnormal half (or zero)
    if (unbiased < -25) {
        return sign;
    }
    mantissa |= 0x800000U;
    const int shift = -unbiased - 1;  // in [14, 24]
    std::uint32_t half = mantissa >> shift;
    const std::uint32_t rest = mantissa & ((1U << shift) - 1U);
    const std::uint32_t halfway = 1U << (shift - 1);
    if (rest > halfway || (rest == halfway && (half & 1U) != 0)) {
        ++half;
    }
    return static_cast<std::uint16_t>(sign | half);
}

float
half_to_float(std::uint16_t bits) noexcept {
    const std::uint32_t sign = static_cast<std::uint32_t>(bits & 0x8000U) << 16;
    std::uint32_t exponent = (bits >> 10) & 0x1FU;
    std::uint32_t mantissa = bits & 0x3FFU;

    std::uint32_t out;
    if (exponent == 0x1F) {
        out = sign | 0x7F800000U | (mantissa << 13);
    } else if (exponent != 0) {
        out = sign | ((exponent + 112U) << 23) | (mantissa << 13);
    } else if (mantissa == 0) {
        out = sign;
    } else {
        // renormalize the subnormal
        exponent = 113;
        while ((mantissa & 0x400U) == 0) {
            mantissa <<= 1;
            --exponent;
        }
        mantissa &= 0x3FFU;
        out = sign | (exponent << 23) | (mantissa << 13);
    }
    return std::bit_cast<float>(out);
}

std::vector<std::uint16_t>
to_half(std::span<const float> values) {
    std::vector<std::uint16_t> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = float_to_half(values[i]);
    }
    return out;
}

std::vector<float>
from_half(std::span<const std::uint16_t> values) {
    std::vector<float> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = half_to_float(values[i]);
    }
    return out;
}

}  // namespace tokenrank
