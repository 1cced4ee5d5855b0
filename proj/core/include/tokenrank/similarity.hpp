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

#include <string>
#include <string_view>

namespace tokenrank {

/// Probability of the "1" answer when the classifier's output is restricted
/// to the two tokens "1" and "0":
///
///   exp(l1) / (exp(l0) + exp(l1)) = 1 / (1 + exp(l0 - l1))
///
/// evaluated so that neither branch overflows. Errors: NonFinite.
double
two_token_similarity(double logit_one, double logit_zero);

/// Global/re-rank score fusion: (1 - lambda) * (s_g + 1) / 2 + lambda * s_r.
struct FusionConfig {
    static constexpr double kDefaultLambda = 0.5;
    double lambda = kDefaultLambda;
};

/// Maps a cosine similarity in [-1, 1] onto [0, 1].
inline double
normalize_global(double s_global) {
    return (s_global + 1.0) / 2.0;
}

/// s_g must lie in [-1, 1] and s_r in [0, 1]; values within 1e-6 outside
/// are clamped (rounding in float dot products). Errors: OutOfRange.
double
fuse(double s_global, double s_rerank, const FusionConfig& config);

enum class PromptId { Generic, Object, Landmark };

/// Verbatim instruction text for each prompt id.
std::string_view
prompt_text(PromptId id);

std::string_view
to_string(PromptId id);

/// Errors: InvalidArgument.
PromptId
parse_prompt(std::string_view name);

}  // namespace tokenrank
