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

#include <cstdint>
#include <span>
#include <vector>

namespace tokenrank {

/// IEEE 754 binary16 <-> binary32. Narrowing rounds to nearest, ties to even;
/// overflow saturates to infinity, NaN stays NaN.
std::uint16_t
float_to_half(float value) noexcept;

float
half_to_float(std::uint16_t bits) noexcept;

/// Rounds through binary16 and back.
inline float
round_to_half(float value) noexcept {
    return half_to_float(float_to_half(value));
}

std::vector<std::uint16_t>
to_half(std::span<const float> values);

std::vector<float>
from_half(std::span<const std::uint16_t> values);

}  // namespace tokenrank
