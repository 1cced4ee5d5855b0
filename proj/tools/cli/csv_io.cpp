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

#include "csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>

#include "tokenrank/error.hpp"

namespace tokenrank::cli {

namespace {

std::vector<std::string_view>
split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double
parse_double(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        fail(ErrorCode::Corrupt, "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    }
    return v;
}

std::size_t
parse_rank(std::string_view s, std::size_t line_no) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
        fail(ErrorCode::Corrupt, "line " + std::to_string(line_no) + ": bad rank '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::string
format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void
write_ranked_csv(std::ostream& out, std::span<const RankedList> lists) {
    bool full = false;
    for (const auto& l : lists) {
        if (!l.items.empty()) {
            full = l.items.front().s_rerank.has_value();
            break;
        }
    }
    out << "query_id,rank,image_id,s_g" << (full ? ",s_r,s_fused" : "") << '\n';
    for (const auto& l : lists) {
        for (std::size_t r = 0; r < l.items.size(); ++r) {
            const auto& it = l.items[r];
            out << l.query_id << ',' << (r + 1) << ',' << it.image_id << ',' << format_score(it.s_global);
            if (full) {
                out << ',' << format_score(it.s_rerank.value_or(0.0)) << ','
                    << format_score(it.s_fused.value_or(it.s_global));
            }
            out << '\n';
        }
    }
}

std::vector<RankedList>
parse_ranked_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        fail(ErrorCode::Corrupt, "ranked file is empty");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const bool full = line == "query_id,rank,image_id,s_g,s_r,s_fused";
    if (!full && line != "query_id,rank,image_id,s_g") {
        fail(ErrorCode::Corrupt, "unexpected ranked header '" + line + "'");
    }
    const std::size_t fields = full ? 6 : 4;

    std::vector<RankedList> lists;
    std::map<std::string, std::size_t> slot;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != fields) {
            fail(ErrorCode::Corrupt, "line " + std::to_string(line_no) + ": expected " + std::to_string(fields) +
                                         " fields, got " + std::to_string(f.size()));
        }
        const std::string qid(f[0]);
        auto [pos, inserted] = slot.try_emplace(qid, lists.size());
        if (inserted) {
            lists.push_back({qid, {}});
        }
        auto& list = lists[pos->second];
        const std::size_t rank = parse_rank(f[1], line_no);
        if (rank != list.items.size() + 1) {
            fail(ErrorCode::Corrupt, "line " + std::to_string(line_no) + ": rank " + std::to_string(rank) +
                                         " out of sequence for query '" + qid + "'");
        }
        RankedItem item;
        item.image_id = std::string(f[2]);
        if (!is_valid_image_id(item.image_id)) {
            fail(ErrorCode::Corrupt, "line " + std::to_string(line_no) + ": invalid image id");
        }
        item.s_global = parse_double(f[3], line_no);
        if (full) {
            item.s_rerank = parse_double(f[4], line_no);
            item.s_fused = parse_double(f[5], line_no);
        }
        list.items.push_back(std::move(item));
    }
    return lists;
}

std::vector<RankedList>
load_ranked_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    return parse_ranked_csv(in);
}

std::vector<Shortlist>
to_shortlists(std::span<const RankedList> lists) {
    std::vector<Shortlist> out;
    out.reserve(lists.size());
    for (const auto& l : lists) {
        Shortlist s{l.query_id, {}};
        s.candidates.reserve(l.items.size());
        for (const auto& it : l.items) {
            s.candidates.push_back({it.image_id, it.s_global});
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace tokenrank::cli
