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

#include "tokenrank/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "tokenrank/error.hpp"

namespace tokenrank {

namespace {

constexpr double kRangeSlack = 1e-6;

constexpr std::string_view kGenericPrompt =
    "You are given two images: a query and a candidate.  Determine whether the candidate is similar to the "
    "query image.\n"
    "\n"
    "Output strictly a single digit:\n"
    "- 0 = the object instance does not appear.\n"
    "- 1 = the object instance appears in the candidate.\n"
    "Do not output anything else.";

constexpr std::string_view kObjectPrompt =
    "You are given two images: a query and a candidate. Determine whether the exact same object instance from "
    "the query image is present in the candidate image.\n"
    "- The instance must be the same, not just a similar object.\n"
    "- The instance may appear at a different scale, partially occluded, or among other objects.\n"
    "\n"
    "Output strictly a single digit:\n"
    "- 0 = the object instance does not appear.\n"
    "- 1 = the object instance appears in the candidate.\n"
    "Do not output anything else.";

constexpr std::string_view kLandmarkPrompt =
    "You are given two images: a query and a candidate. Determine whether the exact same landmark, building, "
    "or architectural detail from the query image is present in the candidate image.\n"
    "- The instance must be the same, not just a similar-looking building or structure.\n"
    "- The query image may show the entire landmark or just a specific, cropped part of it (like a doorway, "
    "statue, or window).\n"
    "- The instance in the candidate image may appear at a different scale, from a different "
    "viewpoint/angle, under different lighting, or be partially occluded.\n"
    "Output strictly a single digit:\n"
    "- 0 = the object instance does not appear.\n"
    "- 1 = the object instance appears in the candidate.\n"
    "Do not output anything else.";

double
clamp_checked(double v, double lo, double hi, const char* what) {
    if (!(v >= lo - kRangeSlack && v <= hi + kRangeSlack)) {
        fail(ErrorCode::OutOfRange, std::string(what) + " = " + std::to_string(v) + " is outside [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return std::clamp(v, lo, hi);
}

}  // namespace

double
two_token_similarity(double logit_one, double logit_zero) {
    if (!std::isfinite(logit_one) || !std::isfinite(logit_zero)) {
        fail(ErrorCode::NonFinite, "logits must be finite");
    }
    const double margin = logit_one - logit_zero;
    if (margin >= 0.0) {
        return 1.0 / (1.0 + std::exp(-margin));
    }
    const double e = std::exp(margin);
    return e / (1.0 + e);
}

double
fuse(double s_global, double s_rerank, const FusionConfig& config) {
    if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) {
        fail(ErrorCode::OutOfRange, "lambda must be in [0, 1]");
    }
    const double g = clamp_checked(s_global, -1.0, 1.0, "s_g");
    const double r = clamp_checked(s_rerank, 0.0, 1.0, "s_r");
    return (1.0 - config.lambda) * normalize_global(g) + config.lambda * r;
}

std::string_view
prompt_text(PromptId id) {
    switch (id) {
        case PromptId::Generic: return kGenericPrompt;
        case PromptId::Object: return kObjectPrompt;
        case PromptId::Landmark: return kLandmarkPrompt;
    }
    return kObjectPrompt;
}

std::string_view
to_string(PromptId id) {
    switch (id) {
        case PromptId::Generic: return "generic";
        case PromptId::Object: return "object";
        case PromptId::Landmark: return "landmark";
    }
    return "object";
}

PromptId
parse_prompt(std::string_view name) {
    if (name == "generic") {
        return PromptId::Generic;
    }
    if (name == "object") {
        return PromptId::Object;
    }
    if (name == "landmark") {
        return PromptId::Landmark;
    }
    fail(ErrorCode::InvalidArgument, "unknown prompt '" + std::string(name) + "'");
}

}  // namespace tokenrank
