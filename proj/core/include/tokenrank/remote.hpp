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

#include <chrono>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tokenrank/robustness.hpp"
#include "tokenrank/scorer.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

inline constexpr int kWireProtocol = 1;

/// Environment variable consulted for the default endpoint.
inline constexpr const char* kEndpointEnv = "TOKENRANK_ENDPOINT";

struct RemoteConfig {
    /// Base URL, e.g. http://127.0.0.1:8080
    std::string endpoint;
    /// Candidates per POST /v1/score request.
    std::size_t batch_size = 8;
    /// Requests in flight per score_batch call.
    std::size_t max_in_flight = 4;
    std::chrono::milliseconds timeout{120'000};
    /// Extra attempts after a 5xx, timeout or connection failure.
    std::size_t max_retries = 2;
    std::chrono::milliseconds retry_backoff{100};
};

struct ServiceHealth {
    int protocol = 0;
    std::size_t dim = 0;
    std::string model;
};

/// One scored pair as returned by the service.
struct PairLogits {
    double logit_zero;
    double logit_one;
};

/// Little-endian 16-bit float tokens, base64 encoded.
std::string
encode_tokens_b64(const TokenGrid& grid);

/// Errors: Corrupt on bad base64 or when the payload is not count halves.
std::vector<float>
decode_tokens_b64(std::string_view b64, std::size_t count);

/// JSON body of POST /v1/score.
std::string
score_request_json(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId prompt);

/// Parses a 200 response of POST /v1/score. Scores are recomputed from the
/// logits; any `scores` sent along must agree within 1e-6.
/// Errors: ProtocolMismatch (version, count or consistency), Corrupt (malformed).
std::vector<double>
parse_score_response(std::string_view body, std::size_t expected);

/// Wire-side grid object {rows, cols, positions, tokens_b64} of dimension d.
/// Errors: Corrupt, InvalidGrid.
TokenGrid
parse_wire_grid(std::string_view json_object, std::size_t dim);

std::string
wire_grid_json(const TokenGrid& grid);

/// GET /v1/health. Errors: Timeout, ServiceError, ProtocolMismatch.
ServiceHealth
fetch_health(const RemoteConfig& config);

/// Scorer backed by the HTTP service. The first call checks /v1/health;
/// protocol or dimension disagreement raises ProtocolMismatch. Candidates are
/// split into batch_size requests with at most max_in_flight outstanding;
/// scores come back in candidate order regardless of completion order.
class RemoteScorer final : public Scorer {
public:
    explicit RemoteScorer(RemoteConfig config);
    ~RemoteScorer() override;

    std::vector<double>
    score_batch(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId prompt) const override;

    std::string
    id() const override;

    const RemoteConfig&
    config() const noexcept {
        return config_;
    }

private:
    const ServiceHealth&
    health() const;

    RemoteConfig config_;
    struct HealthCache;
    std::unique_ptr<HealthCache> cache_;
};

/// POST /v1/extract with PNG bytes. The response carries a token grid.
class RemoteExtractor final : public Extractor {
public:
    RemoteExtractor(RemoteConfig config, std::size_t resolution = 560);

    TokenGrid
    extract(const Image& image) const override;

    std::string
    id() const override;

private:
    RemoteConfig config_;
    std::size_t resolution_;
};

}  // namespace tokenrank
