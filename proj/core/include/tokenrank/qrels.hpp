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

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

namespace tokenrank {

struct QrelEntry {
    std::string image_id;
    std::optional<std::string> group;

    friend bool
    operator==(const QrelEntry&, const QrelEntry&) = default;
};

/// Relevance judgments: query id -> positives, each optionally tagged with a
/// group label used for grouped reporting.
class Qrels {
public:
    /// Adds one positive. A repeated (query, image) pair keeps the first entry.
    void
    add(const std::string& query_id, QrelEntry entry);

    bool
    contains(const std::string& query_id) const {
        return entries_.count(query_id) != 0;
    }

    const std::vector<QrelEntry>&
    positives(const std::string& query_id) const;

    std::unordered_set<std::string>
    positive_ids(const std::string& query_id) const;

    const std::map<std::string, std::vector<QrelEntry>>&
    entries() const noexcept {
        return entries_;
    }

    std::size_t
    num_queries() const noexcept {
        return entries_.size();
    }

private:
    std::map<std::string, std::vector<QrelEntry>> entries_;
};

/// TSV: `query_id<TAB>image_id<TAB>1[<TAB>group_label]`; `#` lines and blank
/// lines are skipped. Lines with relevance 0 are ignored.
Qrels
parse_qrels(std::istream& in);

Qrels
load_qrels(const std::filesystem::path& path);

void
write_qrels(std::ostream& out, const Qrels& qrels);

}  // namespace tokenrank
