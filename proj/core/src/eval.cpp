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

#include "tokenrank/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iterator>

#include "tokenrank/error.hpp"

namespace tokenrank {

namespace {

std::string
fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// AP over `ranked` with `junk` ids removed from the ranking before truncation.
double
ap_ignoring(std::span<const std::string> ranked,
            const std::set<std::string>& positives,
            const std::set<std::string>& junk,
            std::size_t k) {
    std::vector<std::string> kept;
    kept.reserve(std::min(ranked.size(), k + junk.size()));
    for (const auto& id : ranked) {
        if (junk.count(id) == 0) {
            kept.push_back(id);
        }
    }
    return ap_at_k(kept, positives, k);
}

}  // namespace

double
ap_at_k(std::span<const std::string> ranked, const std::set<std::string>& positives, std::size_t k) {
    if (k == 0) {
        fail(ErrorCode::InvalidArgument, "k must be at least 1");
    }
    if (positives.empty()) {
        fail(ErrorCode::NoPositives, "average precision needs at least one positive");
    }
    std::set<std::string> found;
    double sum = 0.0;
    const std::size_t depth = std::min(k, ranked.size());
    for (std::size_t r = 0; r < depth; ++r) {
        if (positives.count(ranked[r]) != 0 && found.insert(ranked[r]).second) {
            sum += static_cast<double>(found.size()) / static_cast<double>(r + 1);
        }
    }
    return sum / static_cast<double>(std::min(positives.size(), k));
}

TimingSummary
summarize_timings(std::vector<double> seconds) {
    TimingSummary s;
    s.samples = seconds.size();
    if (seconds.empty()) {
        return s;
    }
    double total = 0.0;
    for (double v : seconds) {
        total += v;
    }
    s.mean = total / static_cast<double>(seconds.size());
    s.min = *std::min_element(seconds.begin(), seconds.end());
    s.max = *std::max_element(seconds.begin(), seconds.end());
    s.p50 = percentile(seconds, 0.50);
    s.p95 = percentile(std::move(seconds), 0.95);
    return s;
}

EvalReport
evaluate(std::span<const RankedList> ranked, const Qrels& qrels, std::size_t k) {
    if (k == 0) {
        fail(ErrorCode::InvalidArgument, "k must be at least 1");
    }
    EvalReport report;
    report.k = k;
    std::map<std::string, std::pair<double, std::size_t>> groups;
    for (const auto& list : ranked) {
        if (!qrels.contains(list.query_id)) {
            fail(ErrorCode::MissingQrels, "no qrels for query '" + list.query_id + "'");
        }
        if (report.per_query.count(list.query_id) != 0) {
            fail(ErrorCode::InvalidArgument, "query '" + list.query_id + "' ranked twice");
        }
        std::vector<std::string> ids;
        ids.reserve(list.items.size());
        for (const auto& item : list.items) {
            ids.push_back(item.image_id);
        }

        std::set<std::string> all;
        std::map<std::string, std::set<std::string>> by_group;
        for (const auto& e : qrels.positives(list.query_id)) {
            all.insert(e.image_id);
            if (e.group) {
                by_group[*e.group].insert(e.image_id);
            }
        }
        if (all.empty()) {
            fail(ErrorCode::NoPositives, "query '" + list.query_id + "' has no positives");
        }
        report.per_query[list.query_id] = ap_at_k(ids, all, k);

        // Per group, positives of other groups are neither hits nor misses.
        for (const auto& [label, members] : by_group) {
            std::set<std::string> junk;
            std::set_difference(all.begin(), all.end(), members.begin(), members.end(),
                                std::inserter(junk, junk.end()));
            auto& acc = groups[label];
            acc.first += ap_ignoring(ids, members, junk, k);
            acc.second += 1;
        }
    }
    double total = 0.0;
    for (const auto& [id, ap] : report.per_query) {
        total += ap;
    }
    report.map_at_k = report.per_query.empty() ? 0.0 : total / static_cast<double>(report.per_query.size());
    for (const auto& [label, acc] : groups) {
        report.per_group[label] = acc.first / static_cast<double>(acc.second);
    }
    return report;
}

void
write_eval_csv(std::ostream& out, const EvalReport& report) {
    out << "summary," << report.k << ',' << fmt(report.map_at_k);
    if (report.timing && report.timing->samples > 0) {
        out << ',' << fmt(report.timing->mean) << ',' << fmt(report.timing->p50) << ',' << fmt(report.timing->p95);
    } else {
        out << ",,,";
    }
    out << '\n';
    for (const auto& [id, ap] : report.per_query) {
        out << "query," << id << ',' << fmt(ap) << '\n';
    }
    for (const auto& [label, map] : report.per_group) {
        out << "group," << label << ',' << fmt(map) << '\n';
    }
}

double
percentile(std::vector<double> values, double p) {
    if (values.empty()) {
        fail(ErrorCode::EmptyScores, "percentile of an empty sample");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "percentile rank must be in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double
negative_baseline(const std::map<std::string, std::vector<double>>& negatives) {
    if (negatives.empty()) {
        fail(ErrorCode::EmptyScores, "no queries with negative scores");
    }
    double total = 0.0;
    for (const auto& [query, scores] : negatives) {
        if (scores.empty()) {
            fail(ErrorCode::EmptyScores, "query '" + query + "' has no negative scores");
        }
        total += percentile(scores, 0.05);
    }
    return total / static_cast<double>(negatives.size());
}

TimingSummary
time_queries(std::size_t n, const std::function<void(std::size_t)>& run) {
    std::vector<double> seconds;
    seconds.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run(i);
        seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return summarize_timings(std::move(seconds));
}

}  // namespace tokenrank
