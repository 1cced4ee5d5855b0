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

#include "tokenrank/remote.hpp"

#include <httplib.h>

#include <boost/beast/core/detail/base64.hpp>
#include <cmath>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <thread>

#include "tokenrank/error.hpp"
#include "tokenrank/half.hpp"
#include "tokenrank/parallel.hpp"
#include "tokenrank/similarity.hpp"

namespace tokenrank {

namespace {

namespace base64 = boost::beast::detail::base64;
using json = nlohmann::json;

constexpr double kScoreTolerance = 1e-6;

struct Reply {
    int status = 0;
    std::string body;
};

std::string
error_message(const std::string& body) {
    try {
        const auto j = json::parse(body);
        if (j.is_object() && j.contains("error") && j["error"].is_string()) {
            return j["error"].get<std::string>();
        }
    } catch (const json::exception&) {
    }
    return body.substr(0, 200);
}

// One HTTP exchange with retries on 5xx, timeouts and connection failures.
Reply
exchange(const RemoteConfig& config,
         const std::string& path,
         const std::string* body,
         const std::string& content_type = "application/json") {
    if (config.endpoint.empty()) {
        fail(ErrorCode::InvalidArgument, std::string("no scoring endpoint configured (set --endpoint or ") +
                                             kEndpointEnv + ")");
    }
    std::optional<Error> last;
    for (std::size_t attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(config.retry_backoff * attempt);
        }
        httplib::Client client(config.endpoint);
        if (!client.is_valid()) {
            throw Error(ErrorCode::ServiceError, "invalid endpoint '" + config.endpoint + "'", 0);
        }
        client.set_connection_timeout(config.timeout);
        client.set_read_timeout(config.timeout);
        client.set_write_timeout(config.timeout);

        const auto started = std::chrono::steady_clock::now();
        auto res = body ? client.Post(path, *body, content_type) : client.Get(path);
        if (!res) {
            const auto elapsed = std::chrono::steady_clock::now() - started;
            const auto err = res.error();
            if (err == httplib::Error::ConnectionTimeout || elapsed >= config.timeout) {
                last.emplace(ErrorCode::Timeout, path + " timed out after " + std::to_string(config.timeout.count()) +
                                                     " ms");
            } else {
                last.emplace(ErrorCode::ServiceError,
                             path + " failed: " + httplib::to_string(err) + " (" + config.endpoint + ")", 0);
            }
            continue;
        }
        if (res->status >= 500) {
            last.emplace(ErrorCode::ServiceError,
                         path + " returned " + std::to_string(res->status) + ": " + error_message(res->body),
                         res->status);
            continue;
        }
        if (res->status == 409 || res->status == 422) {
            throw Error(ErrorCode::ProtocolMismatch,
                        path + " rejected the request: " + error_message(res->body), res->status);
        }
        if (res->status != 200) {
            throw Error(ErrorCode::ServiceError,
                        path + " returned " + std::to_string(res->status) + ": " + error_message(res->body),
                        res->status);
        }
        return {res->status, std::move(res->body)};
    }
    throw *last;
}

json
parse_object(std::string_view text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        fail(ErrorCode::Corrupt, std::string(what) + " is not a JSON object");
    }
    return j;
}

void
check_protocol(const json& j, const char* what) {
    if (!j.contains("protocol") || !j["protocol"].is_number_integer() || j["protocol"].get<int>() != kWireProtocol) {
        fail(ErrorCode::ProtocolMismatch, std::string(what) + " speaks protocol " +
                                              (j.contains("protocol") ? j["protocol"].dump() : "<missing>") +
                                              ", expected " + std::to_string(kWireProtocol));
    }
}

json
grid_to_json(const TokenGrid& grid) {
    json positions = json::array();
    for (const auto& p : grid.positions()) {
        positions.push_back({p.row, p.col});
    }
    return {
        {"rows", grid.grid_rows()},
        {"cols", grid.grid_cols()},
        {"positions", std::move(positions)},
        {"tokens_b64", encode_tokens_b64(grid)},
    };
}

TokenGrid
grid_from_json(const json& j, std::size_t dim) {
    try {
        const auto rows = j.at("rows").get<std::uint16_t>();
        const auto cols = j.at("cols").get<std::uint16_t>();
        std::vector<GridPos> positions;
        for (const auto& p : j.at("positions")) {
            if (!p.is_array() || p.size() != 2) {
                fail(ErrorCode::Corrupt, "position must be a [row, col] pair");
            }
            positions.push_back({p[0].get<std::uint16_t>(), p[1].get<std::uint16_t>()});
        }
        auto tokens = decode_tokens_b64(j.at("tokens_b64").get<std::string>(), positions.size() * dim);
        return TokenGrid(std::move(tokens), dim, std::move(positions), rows, cols);
    } catch (const json::exception& e) {
        fail(ErrorCode::Corrupt, std::string("malformed grid: ") + e.what());
    }
}

}  // namespace

std::string
encode_tokens_b64(const TokenGrid& grid) {
    const auto halves = to_half(grid.tokens());
    std::vector<std::uint8_t> raw(halves.size() * 2);
    for (std::size_t i = 0; i < halves.size(); ++i) {
        raw[2 * i] = static_cast<std::uint8_t>(halves[i] & 0xFF);
        raw[2 * i + 1] = static_cast<std::uint8_t>(halves[i] >> 8);
    }
    std::string out(base64::encoded_size(raw.size()), '\0');
    out.resize(base64::encode(out.data(), raw.data(), raw.size()));
    return out;
}

std::vector<float>
decode_tokens_b64(std::string_view b64, std::size_t count) {
    if (b64.size() % 4 != 0) {
        fail(ErrorCode::Corrupt, "base64 length is not a multiple of 4");
    }
    std::vector<std::uint8_t> raw(base64::decoded_size(b64.size()));
    const auto [written, read] = base64::decode(raw.data(), b64.data(), b64.size());
    const std::size_t padding = b64.size() - read;
    if (padding > 2 || b64.find_first_not_of('=', read) != std::string_view::npos) {
        fail(ErrorCode::Corrupt, "invalid base64 character");
    }
    if (written != count * 2) {
        fail(ErrorCode::Corrupt,
             "token payload holds " + std::to_string(written) + " bytes, expected " + std::to_string(count * 2));
    }
    std::vector<std::uint16_t> halves(count);
    for (std::size_t i = 0; i < count; ++i) {
        halves[i] = static_cast<std::uint16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
    }
    return from_half(halves);
}

std::string
wire_grid_json(const TokenGrid& grid) {
    return grid_to_json(grid).dump();
}

TokenGrid
parse_wire_grid(std::string_view json_object, std::size_t dim) {
    return grid_from_json(parse_object(json_object, "grid"), dim);
}

std::string
score_request_json(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId prompt) {
    json cands = json::array();
    for (const auto& c : candidates) {
        if (c.dim() != query.dim()) {
            fail(ErrorCode::DimensionMismatch,
                 "candidate D=" + std::to_string(c.dim()) + " vs query D=" + std::to_string(query.dim()));
        }
        cands.push_back(grid_to_json(c));
    }
    json req = {
        {"protocol", kWireProtocol},
        {"d", query.dim()},
        {"prompt_id", std::string(to_string(prompt))},
        {"query", grid_to_json(query)},
        {"candidates", std::move(cands)},
    };
    return req.dump();
}

std::vector<double>
parse_score_response(std::string_view body, std::size_t expected) {
    const json j = parse_object(body, "score response");
    check_protocol(j, "score response");
    if (!j.contains("logits") || !j["logits"].is_array()) {
        fail(ErrorCode::Corrupt, "score response has no logits array");
    }
    const auto& logits = j["logits"];
    if (logits.size() != expected) {
        fail(ErrorCode::ProtocolMismatch, "score response holds " + std::to_string(logits.size()) +
                                              " logit pairs for " + std::to_string(expected) + " candidates");
    }
    std::vector<double> scores;
    scores.reserve(expected);
    try {
        for (const auto& pair : logits) {
            if (!pair.is_array() || pair.size() != 2) {
                fail(ErrorCode::Corrupt, "logits entry must be [l0, l1]");
            }
            scores.push_back(two_token_similarity(pair[1].get<double>(), pair[0].get<double>()));
        }
        if (j.contains("scores")) {
            const auto& sent = j["scores"];
            if (!sent.is_array() || sent.size() != expected) {
                fail(ErrorCode::ProtocolMismatch, "scores and logits disagree in length");
            }
            for (std::size_t i = 0; i < expected; ++i) {
                if (std::abs(sent[i].get<double>() - scores[i]) > kScoreTolerance) {
                    fail(ErrorCode::ProtocolMismatch,
                         "score " + std::to_string(i) + " does not match its logits");
                }
            }
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::Corrupt, std::string("malformed score response: ") + e.what());
    }
    return scores;
}

ServiceHealth
fetch_health(const RemoteConfig& config) {
    const auto reply = exchange(config, "/v1/health", nullptr);
    const json j = parse_object(reply.body, "health response");
    check_protocol(j, "service");
    ServiceHealth h;
    h.protocol = j["protocol"].get<int>();
    try {
        h.dim = j.at("d").get<std::size_t>();
        h.model = j.value("model", std::string());
    } catch (const json::exception& e) {
        fail(ErrorCode::Corrupt, std::string("malformed health response: ") + e.what());
    }
    return h;
}

struct RemoteScorer::HealthCache {
    std::mutex mu;
    std::optional<ServiceHealth> health;
};

RemoteScorer::RemoteScorer(RemoteConfig config)
    : config_(std::move(config)), cache_(std::make_unique<HealthCache>()) {
    if (config_.batch_size == 0 || config_.max_in_flight == 0) {
        fail(ErrorCode::InvalidArgument, "batch size and in-flight limit must be positive");
    }
}

RemoteScorer::~RemoteScorer() = default;

const ServiceHealth&
RemoteScorer::health() const {
    std::lock_guard lock(cache_->mu);
    if (!cache_->health) {
        cache_->health = fetch_health(config_);
    }
    return *cache_->health;
}

std::vector<double>
RemoteScorer::score_batch(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId prompt) const {
    const auto& h = health();
    if (h.dim != query.dim()) {
        fail(ErrorCode::ProtocolMismatch, "service expects D=" + std::to_string(h.dim) + ", query has D=" +
                                              std::to_string(query.dim()));
    }
    const std::size_t n = candidates.size();
    const std::size_t chunks = n / config_.batch_size + (n % config_.batch_size != 0 ? 1 : 0);
    std::vector<double> scores(n);
    parallel_for(chunks, config_.max_in_flight, [&](std::size_t c) {
        const std::size_t begin = c * config_.batch_size;
        const std::size_t count = std::min(config_.batch_size, n - begin);
        const std::string body = score_request_json(query, candidates.subspan(begin, count), prompt);
        const auto reply = exchange(config_, "/v1/score", &body);
        const auto part = parse_score_response(reply.body, count);
        std::copy(part.begin(), part.end(), scores.begin() + static_cast<std::ptrdiff_t>(begin));
    });
    return scores;
}

std::string
RemoteScorer::id() const {
    return "remote:" + health().model;
}

RemoteExtractor::RemoteExtractor(RemoteConfig config, std::size_t resolution)
    : config_(std::move(config)), resolution_(resolution) {
    if (resolution_ == 0) {
        fail(ErrorCode::InvalidArgument, "extraction resolution must be positive");
    }
}

TokenGrid
RemoteExtractor::extract(const Image& image) const {
    const auto png = encode_png(image);
    const std::string body(png.begin(), png.end());
    const auto reply = exchange(config_, "/v1/extract?resolution=" + std::to_string(resolution_), &body, "image/png");
    const json j = parse_object(reply.body, "extract response");
    check_protocol(j, "extract response");
    std::size_t dim = 0;
    try {
        dim = j.at("d").get<std::size_t>();
    } catch (const json::exception& e) {
        fail(ErrorCode::Corrupt, std::string("malformed extract response: ") + e.what());
    }
    return grid_from_json(j, dim);
}

std::string
RemoteExtractor::id() const {
    return "remote-extract:" + std::to_string(resolution_);
}

}  // namespace tokenrank
