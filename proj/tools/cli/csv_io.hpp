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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tokenrank/search.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank::cli {

/// %.17g, enough digits to round-trip a double.
std::string
format_score(double v);

/// `query_id,rank,image_id,s_g[,s_r,s_fused]`; the optional columns are
/// written when the first item of the first list carries them. Ranks are 1-based.
void
write_ranked_csv(std::ostream& out, std::span<const RankedList> lists);

/// Reads either layout. Lists appear in first-seen order, items by rank.
/// Errors: Corrupt on malformed rows, duplicate or non-contiguous ranks.
std::vector<RankedList>
parse_ranked_csv(std::istream& in);

std::vector<RankedList>
load_ranked_csv(const std::filesystem::path& path);

/// Ranked lists reduced to (id, s_g) shortlists, preserving rank order.
std::vector<Shortlist>
to_shortlists(std::span<const RankedList> lists);

}  // namespace tokenrank::cli
