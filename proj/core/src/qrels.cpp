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

#include "tokenrank/qrels.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tokenrank/error.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

namespace {

std::vector<std::string>
split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, '\t')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == '\t') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

void
Qrels::add(const std::string& query_id, QrelEntry entry) {
    auto& list = entries_[query_id];
    const bool present = std::any_of(list.begin(), list.end(), [&](const QrelEntry& e) {
        return e.image_id == entry.image_id;
    });
    if (!present) {
        list.push_back(std::move(entry));
    }
}

const std::vector<QrelEntry>&
Qrels::positives(const std::string& query_id) const {
    auto it = entries_.find(query_id);
    if (it == entries_.end()) {
        fail(ErrorCode::MissingQrels, "no judgments for query '" + query_id + "'");
    }
    return it->second;
}

std::unordered_set<std::string>
Qrels::positive_ids(const std::string& query_id) const {
    std::unordered_set<std::string> ids;
    for (const auto& e : positives(query_id)) {
        ids.insert(e.image_id);
    }
    return ids;
}

Qrels
parse_qrels(std::istream& in) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = split_tabs(line);
        if (fields.size() < 3 || fields.size() > 4) {
            fail(ErrorCode::InvalidArgument,
                 "qrels line " + std::to_string(line_no) + ": expected 3 or 4 tab-separated fields");
        }
        if (!is_valid_image_id(fields[0]) || !is_valid_image_id(fields[1])) {
            fail(ErrorCode::InvalidArgument, "qrels line " + std::to_string(line_no) + ": bad id");
        }
        if (fields[2] != "1" && fields[2] != "0") {
            fail(ErrorCode::InvalidArgument,
                 "qrels line " + std::to_string(line_no) + ": relevance must be 0 or 1");
        }
        if (fields[2] == "0") {
            continue;
        }
        QrelEntry entry{fields[1], std::nullopt};
        if (fields.size() == 4) {
            if (fields[3].empty()) {
                fail(ErrorCode::InvalidArgument,
                     "qrels line " + std::to_string(line_no) + ": empty group label");
            }
            entry.group = fields[3];
        }
        qrels.add(fields[0], std::move(entry));
    }
    return qrels;
}

Qrels
load_qrels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoFailure, "cannot open qrels file " + path.string());
    }
    return parse_qrels(in);
}

void
write_qrels(std::ostream& out, const Qrels& qrels) {
    for (const auto& [query, list] : qrels.entries()) {
        for (const auto& e : list) {
            out << query << '\t' << e.image_id << "\t1";
            if (e.group) {
                out << '\t' << *e.group;
            }
            out << '\n';
        }
    }
}

}  // namespace tokenrank
