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

#include "tokenrank/dump.hpp"

#include <algorithm>
#include <cmath>

#include "tokenrank/bytes.hpp"
#include "tokenrank/error.hpp"
#include "tokenrank/half.hpp"

namespace tokenrank {

namespace {

constexpr std::string_view kDumpMagic = "TKDP";
constexpr std::uint16_t kDumpVersion = 1;

}  // namespace

std::vector<std::uint8_t>
serialize_dump(const TokenGrid& grid) {
    ByteWriter w;
    w.raw(kDumpMagic);
    w.u16(kDumpVersion);
    w.u32(static_cast<std::uint32_t>(grid.size()));
    w.u32(static_cast<std::uint32_t>(grid.dim()));
    w.u16(grid.grid_rows());
    w.u16(grid.grid_cols());
    for (const auto& p : grid.positions()) {
        w.u16(p.row);
        w.u16(p.col);
    }
    for (float v : grid.tokens()) {
        w.u16(float_to_half(v));
    }
    return w.take();
}

TokenGrid
deserialize_dump(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    if (bytes.size() < 4 || r.raw(4) != kDumpMagic) {
        fail(ErrorCode::BadMagic, "not a token dump");
    }
    if (r.u16() != kDumpVersion) {
        fail(ErrorCode::UnsupportedVersion, "unsupported token dump version");
    }
    const std::size_t m = r.u32();
    const std::size_t d = r.u32();
    const auto rows = r.u16();
    const auto cols = r.u16();
    if (r.remaining() != m * 4 + m * d * 2) {
        fail(ErrorCode::Corrupt, "token dump size does not match its header");
    }
    std::vector<GridPos> positions(m);
    for (auto& p : positions) {
        p.row = r.u16();
        p.col = r.u16();
    }
    std::vector<float> tokens(m * d);
    for (auto& v : tokens) {
        v = half_to_float(r.u16());
    }
    try {
        return TokenGrid(std::move(tokens), d, std::move(positions), rows, cols);
    } catch (const Error& e) {
        fail(ErrorCode::Corrupt, std::string("token dump violates grid invariants: ") + e.what());
    }
}

std::vector<std::uint8_t>
serialize_global(std::span<const float> vector) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(vector.size()));
    for (float v : vector) {
        w.f32(v);
    }
    return w.take();
}

std::vector<float>
deserialize_global(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const std::size_t n = r.u32();
    if (n == 0 || r.remaining() != n * 4) {
        fail(ErrorCode::Corrupt, "global descriptor file size does not match its header");
    }
    std::vector<float> v(n);
    for (auto& x : v) {
        x = r.f32();
    }
    return v;
}

void
write_dump(const std::filesystem::path& dir, const ImageRecord& record) {
    if (!is_valid_image_id(record.image_id)) {
        fail(ErrorCode::InvalidArgument, "invalid image id '" + record.image_id + "'");
    }
    write_file_atomic(dir / (record.image_id + kDumpExtension), serialize_dump(record.grid));
    write_file_atomic(dir / (record.image_id + kGlobalExtension), serialize_global(record.global.vector()));
}

ImageRecord
read_dump(const std::filesystem::path& dir, const std::string& image_id) {
    auto grid = deserialize_dump(read_file(dir / (image_id + kDumpExtension)));
    auto raw = deserialize_global(read_file(dir / (image_id + kGlobalExtension)));
    double norm2 = 0.0;
    for (float x : raw) {
        norm2 += static_cast<double>(x) * x;
    }
    const bool unit = std::abs(std::sqrt(norm2) - 1.0) <= GlobalDescriptor::kNormTolerance;
    GlobalDescriptor global = unit ? GlobalDescriptor(std::move(raw)) : GlobalDescriptor::normalized(std::move(raw));
    return ImageRecord{image_id, std::move(global), std::move(grid)};
}

std::vector<ImageRecord>
load_dump_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        fail(ErrorCode::IoFailure, "not a directory: " + dir.string());
    }
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == kDumpExtension) {
            ids.push_back(entry.path().stem().string());
        }
    }
    std::sort(ids.begin(), ids.end());
    std::vector<ImageRecord> records;
    records.reserve(ids.size());
    for (const auto& id : ids) {
        records.push_back(read_dump(dir, id));
    }
    return records;
}

TokenGrid
round_grid_to_half(const TokenGrid& grid) {
    std::vector<float> tokens(grid.tokens().begin(), grid.tokens().end());
    for (auto& v : tokens) {
        v = round_to_half(v);
    }
    return TokenGrid(std::move(tokens), grid.dim(),
                     std::vector<GridPos>(grid.positions().begin(), grid.positions().end()), grid.grid_rows(),
                     grid.grid_cols());
}

}  // namespace tokenrank
