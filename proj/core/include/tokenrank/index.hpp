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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tokenrank/pq.hpp"
#include "tokenrank/tokensel.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

enum class Compression : std::uint8_t { Fp16 = 0, Pq = 1 };

struct IndexConfig {
    Compression compression = Compression::Fp16;
    SelectionConfig selection;
    /// Required iff compression == Pq.
    std::shared_ptr<const PqCodebooks> codebooks;
    /// Where the codebooks live; recorded in the index header so open() can
    /// find them. Relative paths resolve against the index file's directory.
    std::string codebooks_path;

    static IndexConfig
    fp16(SelectionConfig selection = {}) {
        return IndexConfig{Compression::Fp16, selection, nullptr, {}};
    }

    static IndexConfig
    pq(std::shared_ptr<const PqCodebooks> codebooks, std::string path, SelectionConfig selection = {}) {
        return IndexConfig{Compression::Pq, selection, std::move(codebooks), std::move(path)};
    }
};

/// Token payload of one image as stored on disk.
using TokenPayload = std::variant<std::vector<std::uint16_t>, PqCodes>;

struct IndexEntry {
    std::string image_id;
    std::vector<float> global;
    TokenPayload payload;
    std::vector<GridPos> positions;
    std::uint16_t grid_rows = 0;
    std::uint16_t grid_cols = 0;
    std::size_t token_dim = 0;
};

struct BuildReport {
    std::size_t images = 0;
    std::uint64_t total_bytes = 0;
    double payload_bytes_per_image = 0.0;
    double overhead_bytes_per_image = 0.0;
};

struct ImageBytes {
    std::uint64_t global = 0;     // descriptor floats
    std::uint64_t payload = 0;    // fp16 tokens or PQ codes
    std::uint64_t positions = 0;  // 4 bytes per token
    std::uint64_t metadata = 0;   // ids, shape fields, TOC entry

    std::uint64_t
    total() const noexcept {
        return global + payload + positions + metadata;
    }

    friend bool
    operator==(const ImageBytes&, const ImageBytes&) = default;
};

/// Byte accounting of an index file. `totals.total() + file_overhead ==
/// file_bytes` exactly; file_overhead covers the header, checksums, the
/// descriptor-dimension field and the footer.
struct MemoryReport {
    std::size_t images = 0;
    std::vector<ImageBytes> per_image;
    ImageBytes totals;
    ImageBytes mean_per_image;  // integer division of totals by images (0 if empty)
    std::uint64_t file_overhead = 0;
    std::uint64_t file_bytes = 0;
};

/// Payload size laws: 2*M*D for fp16, M*D/d for PQ.
constexpr std::uint64_t
fp16_payload_bytes(std::uint64_t tokens, std::uint64_t dim) {
    return 2 * tokens * dim;
}

constexpr std::uint64_t
pq_payload_bytes(std::uint64_t tokens, std::uint64_t dim, std::uint64_t sub_dim) {
    return tokens * (dim / sub_dim);
}

/// Applies selection, then compression, to every record and writes the index
/// file atomically. Records need not be pre-validated; an empty record set
/// produces an empty index.
BuildReport
build_index(std::span<const ImageRecord> records,
            const IndexConfig& config,
            const std::filesystem::path& out_path,
            std::size_t jobs = 0);

/// The grid a record turns into after the build's selection and compression,
/// as fetch_tokens would return it. Used by build and as a reference path.
TokenGrid
stored_grid(const ImageRecord& record, const IndexConfig& config);

/// Read-only handle over an index file. Global descriptors are loaded at
/// open; token blocks are read on demand with positional reads, so one handle
/// serves concurrent readers without locking.
class Index {
public:
    /// Errors: IoFailure, BadMagic, UnsupportedVersion, Corrupt.
    /// For PQ indexes, `codebooks` overrides the path recorded in the header.
    static Index
    open(const std::filesystem::path& path, std::shared_ptr<const PqCodebooks> codebooks = nullptr);

    Index(Index&&) noexcept;
    Index&
    operator=(Index&&) noexcept;
    ~Index();

    std::size_t
    size() const noexcept;

    const IndexConfig&
    config() const noexcept;

    std::size_t
    global_dim() const noexcept;

    const std::vector<std::string>&
    ids() const noexcept;

    /// size() x global_dim() row-major descriptor matrix.
    std::span<const float>
    globals() const noexcept;

    std::span<const float>
    global(std::size_t i) const noexcept;

    bool
    contains(const std::string& image_id) const;

    /// Raw stored block. Errors: UnknownId, Corrupt, IoFailure.
    IndexEntry
    fetch_entry(const std::string& image_id) const;

    /// Decoded grid: fp16 widened to float, PQ codes reconstructed.
    TokenGrid
    fetch_tokens(const std::string& image_id) const;

    MemoryReport
    memory_report() const;

private:
    struct State;
    explicit Index(std::unique_ptr<State> state);
    std::unique_ptr<State> state_;
};

/// Text form stored in the index header.
std::string
format_index_config(const IndexConfig& config, std::uint32_t codebooks_crc);

}  // namespace tokenrank
