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

// Per-image token dumps produced by an extractor:
//
//   <id>.tkdp  magic "TKDP", u16 version=1, u32 M, u32 D, u16 grid_rows,
//              u16 grid_cols, M x (u16 row, u16 col), M x D binary16 tokens
//   <id>.glob  u32 D_g, D_g float32 values
//
// All integers little-endian.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tokenrank/types.hpp"

namespace tokenrank {

inline constexpr const char* kDumpExtension = ".tkdp";
inline constexpr const char* kGlobalExtension = ".glob";

/// Tokens are rounded to binary16 on the way out.
std::vector<std::uint8_t>
serialize_dump(const TokenGrid& grid);

TokenGrid
deserialize_dump(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t>
serialize_global(std::span<const float> vector);

std::vector<float>
deserialize_global(std::span<const std::uint8_t> bytes);

/// Writes <dir>/<id>.tkdp and <dir>/<id>.glob.
void
write_dump(const std::filesystem::path& dir, const ImageRecord& record);

/// Reads one image; the descriptor is normalized if it is not unit-norm.
ImageRecord
read_dump(const std::filesystem::path& dir, const std::string& image_id);

/// Every <id>.tkdp in `dir` with its sidecar, sorted by id.
/// Errors: IoFailure (missing dir / sidecar), BadMagic, UnsupportedVersion, Corrupt.
std::vector<ImageRecord>
load_dump_dir(const std::filesystem::path& dir);

/// Rounds every token through binary16, i.e. what a dump roundtrip yields.
TokenGrid
round_grid_to_half(const TokenGrid& grid);

}  // namespace tokenrank
