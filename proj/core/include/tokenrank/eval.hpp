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

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tokenrank/qrels.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

/// Truncated average precision: sum of precision@r over hits within the top
/// k, divided by min(|positives|, k). Errors: NoPositives, InvalidArgument (k = 0).
double
ap_at_k(std::span<const std::string> ranked, const std::set<std::string>& positives, std::size_t k);

struct TimingSummary {
    std::size_t samples = 0;
    double mean = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Summary of durations in seconds; empty input gives an all-zero summary.
TimingSummary
summarize_timings(std::vector<double> seconds);

struct EvalReport {
    std::size_t k = 0;
    double map_at_k = 0.0;
    std::map<std::string, double> per_query;
    /// Mean AP per group label over queries with at least one positive in it.
    std::map<std::string, double> per_group;
    std::optional<TimingSummary> timing;
};

/// Errors: MissingQrels when a ranked query has no qrels entry, NoPositives,
/// InvalidArgument (k = 0 or a query ranked twice).
EvalReport
evaluate(std::span<const RankedList> ranked, const Qrels& qrels, std::size_t k);

/// `summary,k,map,mean,p50,p95`, then `query,<id>,<ap>` rows, then
/// `group,<label>,<map>` rows.
void
write_eval_csv(std::ostream& out, const EvalReport& report);

/// Linear interpolation between order statistics at position p * (n - 1).
/// Errors: EmptyScores, InvalidArgument (p outside [0, 1]).
double
percentile(std::vector<double> values, double p);

/// Mean over queries of the per-query 5th percentile of negative scores.
/// Errors: EmptyScores when the map or any query's scores are empty.
double
negative_baseline(const std::map<std::string, std::vector<double>>& negatives);

/// Calls run(i) for each of n queries and records its wall-clock duration.
TimingSummary
time_queries(std::size_t n, const std::function<void(std::size_t)>& run);

}  // namespace tokenrank
