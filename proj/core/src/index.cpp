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

// Index file layout (little-endian):
//
//   header    "TKIX" u16 version u32 flags, u32+bytes config text,
//             u64 image count, u32 CRC32 of the header bytes before it
//   section 1 u32 D_g, per image: u32+bytes id, D_g float32;      u32 CRC32
//   section 2 per image: u32+bytes id, u16 rows, u16 cols, u32 M,
//             u32 D, u8 payload kind, payload, M x (u16, u16);    u32 CRC32
//   section 3 per image: u32+bytes id, u64 block offset;          u32 CRC32
//   footer    u64 offsets of sections 1..3, u32 CRC32 of those 24 bytes, "TKIX"

#include "tokenrank/index.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include "tokenrank/bytes.hpp"
#include "tokenrank/dump.hpp"
#include "tokenrank/error.hpp"
#include "tokenrank/half.hpp"
#include "tokenrank/parallel.hpp"

namespace tokenrank {

namespace {

constexpr std::string_view kIndexMagic = "TKIX";
constexpr std::uint16_t kIndexVersion = 1;
constexpr std::uint32_t kFlagPq = 1U;
constexpr std::size_t kFooterBytes = 32;
constexpr std::size_t kBlockFixedBytes = 2 + 2 + 4 + 4 + 1;  // rows cols M D kind
constexpr std::size_t kBuildChunk = 64;

std::string
format_hex(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof(buf), "%08x", v);
    return buf;
}

class FileSink {
public:
    explicit FileSink(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) {
            fail(ErrorCode::IoFailure, "cannot create " + path.string());
        }
    }

    void
    write(std::span<const std::uint8_t> data) {
        out_.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        crc_ = crc32(data, crc_);
        offset_ += data.size();
    }

    void
    begin_section() {
        crc_ = 0;
    }

    void
    end_section() {
        ByteWriter w;
        w.u32(crc_);
        out_.write(reinterpret_cast<const char*>(w.buffer().data()), 4);
        offset_ += 4;
    }

    std::uint64_t
    offset() const noexcept {
        return offset_;
    }

    void
    close() {
        out_.flush();
        if (!out_) {
            fail(ErrorCode::IoFailure, "write failed");
        }
        out_.close();
    }

private:
    std::ofstream out_;
    std::uint32_t crc_ = 0;
    std::uint64_t offset_ = 0;
};

std::vector<std::uint8_t>
encode_block(const ImageRecord& record, const IndexConfig& config, std::uint64_t* payload_bytes) {
    const TokenGrid selected = apply_selection(record.grid, config.selection);
    ByteWriter w;
    w.str(record.image_id);
    w.u16(selected.grid_rows());
    w.u16(selected.grid_cols());
    w.u32(static_cast<std::uint32_t>(selected.size()));
    w.u32(static_cast<std::uint32_t>(selected.dim()));
    w.u8(static_cast<std::uint8_t>(config.compression));
    const std::size_t before = w.size();
    if (config.compression == Compression::Fp16) {
        for (float v : selected.tokens()) {
            w.u16(float_to_half(v));
        }
    } else {
        const auto codes = encode(selected, *config.codebooks);
        w.bytes(codes.codes);
    }
    *payload_bytes = w.size() - before;
    for (const auto& p : selected.positions()) {
        w.u16(p.row);
        w.u16(p.col);
    }
    return w.take();
}

void
check_config(const IndexConfig& config) {
    if (config.compression == Compression::Pq && !config.codebooks) {
        fail(ErrorCode::InvalidArgument, "PQ compression needs codebooks");
    }
    if (config.compression == Compression::Fp16 && config.codebooks) {
        fail(ErrorCode::InvalidArgument, "fp16 compression takes no codebooks");
    }
}

struct ParsedConfig {
    Compression compression = Compression::Fp16;
    std::size_t sub_dim = 0;
    SelectionConfig selection;
    std::string codebooks_path;
    std::uint32_t codebooks_crc = 0;
};

ParsedConfig
parse_config_text(std::string_view text) {
    ParsedConfig out;
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::Corrupt, "malformed index config line '" + line + "'");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    const auto& comp = kv["compression"];
    if (comp == "fp16") {
        out.compression = Compression::Fp16;
    } else if (comp.starts_with("pq:")) {
        out.compression = Compression::Pq;
        auto digits = std::string_view(comp).substr(3);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.sub_dim);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || out.sub_dim == 0) {
            fail(ErrorCode::Corrupt, "bad PQ subspace dimension in index config");
        }
        out.codebooks_path = kv["codebooks"];
        const auto& crc = kv["codebooks_crc"];
        auto [p2, ec2] = std::from_chars(crc.data(), crc.data() + crc.size(), out.codebooks_crc, 16);
        if (ec2 != std::errc() || p2 != crc.data() + crc.size()) {
            fail(ErrorCode::Corrupt, "bad codebook checksum in index config");
        }
    } else {
        fail(ErrorCode::Corrupt, "unknown compression '" + comp + "' in index config");
    }
    try {
        out.selection = parse_selection(kv["selection"]);
    } catch (const Error& e) {
        fail(ErrorCode::Corrupt, std::string("bad selection in index config: ") + e.what());
    }
    return out;
}

class Fd {
public:
    explicit Fd(int fd) : fd_(fd) {
    }
    Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {
    }
    Fd&
    operator=(Fd&& other) noexcept {
        if (this != &other) {
            reset();
            fd_ = std::exchange(other.fd_, -1);
        }
        return *this;
    }
    Fd(const Fd&) = delete;
    Fd&
    operator=(const Fd&) = delete;
    ~Fd() {
        reset();
    }

    int
    get() const noexcept {
        return fd_;
    }

private:
    void
    reset() noexcept {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }
    int fd_;
};

std::vector<std::uint8_t>
read_at(int fd, std::uint64_t offset, std::uint64_t size) {
    std::vector<std::uint8_t> buf(size);
    std::uint64_t done = 0;
    while (done < size) {
        const auto n = ::pread(fd, buf.data() + done, size - done, static_cast<off_t>(offset + done));
        if (n < 0) {
            fail(ErrorCode::IoFailure, "read failed at offset " + std::to_string(offset + done));
        }
        if (n == 0) {
            fail(ErrorCode::Corrupt, "index file is truncated");
        }
        done += static_cast<std::uint64_t>(n);
    }
    return buf;
}

// Verifies that the last four bytes of [begin, end) are the CRC32 of the rest.
void
verify_section_crc(int fd, std::uint64_t begin, std::uint64_t end, const char* name) {
    if (end < begin + 4) {
        fail(ErrorCode::Corrupt, std::string(name) + " is too short");
    }
    constexpr std::uint64_t kChunk = 1 << 20;
    std::uint32_t crc = 0;
    const std::uint64_t body_end = end - 4;
    for (std::uint64_t pos = begin; pos < body_end; pos += kChunk) {
        const auto chunk = read_at(fd, pos, std::min(kChunk, body_end - pos));
        crc = crc32(chunk, crc);
    }
    const auto stored = read_at(fd, body_end, 4);
    if (ByteReader(stored).u32() != crc) {
        fail(ErrorCode::Corrupt, std::string(name) + " checksum mismatch");
    }
}

}  // namespace

std::string
format_index_config(const IndexConfig& config, std::uint32_t codebooks_crc) {
    std::string text;
    if (config.compression == Compression::Fp16) {
        text += "compression=fp16\n";
    } else {
        text += "compression=pq:" + std::to_string(config.codebooks->sub_dim()) + "\n";
    }
    text += "selection=" + format_selection(config.selection) + "\n";
    if (config.compression == Compression::Pq) {
        text += "codebooks=" + config.codebooks_path + "\n";
        text += "codebooks_crc=" + format_hex(codebooks_crc) + "\n";
    }
    return text;
}

TokenGrid
stored_grid(const ImageRecord& record, const IndexConfig& config) {
    check_config(config);
    const TokenGrid selected = apply_selection(record.grid, config.selection);
    if (config.compression == Compression::Fp16) {
        return round_grid_to_half(selected);
    }
    auto tokens = reconstruct(encode(selected, *config.codebooks), *config.codebooks);
    return TokenGrid(std::move(tokens), selected.dim(),
                     std::vector<GridPos>(selected.positions().begin(), selected.positions().end()),
                     selected.grid_rows(), selected.grid_cols());
}

BuildReport
build_index(std::span<const ImageRecord> records,
            const IndexConfig& config,
            const std::filesystem::path& out_path,
            std::size_t jobs) {
    check_config(config);
    std::size_t global_dim = 0;
    if (!records.empty()) {
        const auto summary = validate_corpus(records);
        global_dim = summary.global_dim;
        if (config.compression == Compression::Pq && summary.token_dim != config.codebooks->dim()) {
            fail(ErrorCode::DimensionMismatch,
                 "corpus D=" + std::to_string(summary.token_dim) + " vs codebook D=" +
                     std::to_string(config.codebooks->dim()));
        }
    }
    const std::uint32_t cb_crc =
        config.compression == Compression::Pq ? crc32(serialize_codebooks(*config.codebooks)) : 0;

    auto tmp = out_path;
    tmp += ".tmp." + std::to_string(::getpid());
    std::uint64_t payload_total = 0;
    std::uint64_t total_bytes = 0;
    try {
        FileSink sink(tmp);

        ByteWriter header;
        header.raw(kIndexMagic);
        header.u16(kIndexVersion);
        header.u32(config.compression == Compression::Pq ? kFlagPq : 0U);
        header.str(format_index_config(config, cb_crc));
        header.u64(records.size());
        sink.begin_section();
        sink.write(header.buffer());
        sink.end_section();

        const std::uint64_t s1 = sink.offset();
        sink.begin_section();
        ByteWriter w;
        w.u32(static_cast<std::uint32_t>(global_dim));
        for (const auto& rec : records) {
            w.str(rec.image_id);
            for (float v : rec.global.vector()) {
                w.f32(v);
            }
            if (w.size() > (1U << 20)) {
                sink.write(w.buffer());
                w.clear();
            }
        }
        sink.write(w.buffer());
        sink.end_section();

        const std::uint64_t s2 = sink.offset();
        std::vector<std::uint64_t> offsets;
        offsets.reserve(records.size());
        sink.begin_section();
        for (std::size_t start = 0; start < records.size(); start += kBuildChunk) {
            const std::size_t count = std::min(kBuildChunk, records.size() - start);
            std::vector<std::vector<std::uint8_t>> blocks(count);
            std::vector<std::uint64_t> payloads(count);
            parallel_for(count, jobs, [&](std::size_t i) {
                blocks[i] = encode_block(records[start + i], config, &payloads[i]);
            });
            for (std::size_t i = 0; i < count; ++i) {
                offsets.push_back(sink.offset());
                sink.write(blocks[i]);
                payload_total += payloads[i];
            }
        }
        sink.end_section();

        const std::uint64_t s3 = sink.offset();
        sink.begin_section();
        w.clear();
        for (std::size_t i = 0; i < records.size(); ++i) {
            w.str(records[i].image_id);
            w.u64(offsets[i]);
        }
        sink.write(w.buffer());
        sink.end_section();

        ByteWriter footer;
        footer.u64(s1);
        footer.u64(s2);
        footer.u64(s3);
        footer.u32(crc32(footer.buffer()));
        footer.raw(kIndexMagic);
        sink.write(footer.buffer());
        total_bytes = sink.offset();
        sink.close();

        std::filesystem::rename(tmp, out_path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }

    BuildReport report;
    report.images = records.size();
    report.total_bytes = total_bytes;
    if (!records.empty()) {
        const auto n = static_cast<double>(records.size());
        report.payload_bytes_per_image = static_cast<double>(payload_total) / n;
        report.overhead_bytes_per_image = static_cast<double>(total_bytes - payload_total) / n;
    }
    return report;
}

struct Index::State {
    struct Block {
        std::uint64_t offset = 0;
        std::uint64_t size = 0;
        std::uint32_t tokens = 0;
        std::uint32_t dim = 0;
        std::uint16_t rows = 0;
        std::uint16_t cols = 0;
    };

    Fd fd{-1};
    std::filesystem::path path;
    IndexConfig config;
    std::size_t global_dim = 0;
    std::vector<std::string> ids;
    std::vector<float> globals;
    std::unordered_map<std::string, std::size_t> by_id;
    std::vector<Block> blocks;
    MemoryReport report;

    const Block&
    block(const std::string& id, std::size_t* index) const {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            fail(ErrorCode::UnknownId, "image '" + id + "' is not in the index");
        }
        *index = it->second;
        return blocks[it->second];
    }
};

Index::Index(std::unique_ptr<State> state) : state_(std::move(state)) {
}
Index::Index(Index&&) noexcept = default;
Index&
Index::operator=(Index&&) noexcept = default;
Index::~Index() = default;

Index
Index::open(const std::filesystem::path& path, std::shared_ptr<const PqCodebooks> codebooks) {
    auto st = std::make_unique<State>();
    st->path = path;
    st->fd = Fd(::open(path.c_str(), O_RDONLY | O_CLOEXEC));
    const int fd = st->fd.get();
    if (fd < 0) {
        fail(ErrorCode::IoFailure, "cannot open index " + path.string());
    }
    struct stat sb {};
    if (::fstat(fd, &sb) != 0) {
        fail(ErrorCode::IoFailure, "cannot stat index " + path.string());
    }
    const auto file_size = static_cast<std::uint64_t>(sb.st_size);

    {
        const auto lead = read_at(fd, 0, std::min<std::uint64_t>(file_size, 6));
        if (lead.size() < 4 || std::memcmp(lead.data(), kIndexMagic.data(), 4) != 0) {
            fail(ErrorCode::BadMagic, path.string() + " is not a token index");
        }
        if (lead.size() < 6) {
            fail(ErrorCode::Corrupt, "index file is truncated");
        }
        if (ByteReader(std::span(lead).subspan(4)).u16() != kIndexVersion) {
            fail(ErrorCode::UnsupportedVersion, "unsupported index version");
        }
    }
    if (file_size < 6 + kFooterBytes) {
        fail(ErrorCode::Corrupt, "index file is truncated");
    }

    const std::uint64_t footer_at = file_size - kFooterBytes;
    const auto footer = read_at(fd, footer_at, kFooterBytes);
    if (std::memcmp(footer.data() + 28, kIndexMagic.data(), 4) != 0) {
        fail(ErrorCode::Corrupt, "index footer is damaged or the file is truncated");
    }
    ByteReader fr(footer);
    const std::uint64_t s1 = fr.u64();
    const std::uint64_t s2 = fr.u64();
    const std::uint64_t s3 = fr.u64();
    if (fr.u32() != crc32(std::span(footer).first(24))) {
        fail(ErrorCode::Corrupt, "index footer checksum mismatch");
    }
    if (!(s1 >= 6 + 4 && s1 < s2 && s2 < s3 && s3 < footer_at)) {
        fail(ErrorCode::Corrupt, "index section offsets are inconsistent");
    }

    // header
    verify_section_crc(fd, 0, s1, "index header");
    const auto header = read_at(fd, 0, s1 - 4);
    ByteReader hr(header);
    hr.raw(4);
    hr.u16();
    const std::uint32_t flags = hr.u32();
    const std::string config_text = hr.str();
    const std::uint64_t count = hr.u64();
    if (hr.remaining() != 0) {
        fail(ErrorCode::Corrupt, "index header has trailing bytes");
    }
    const auto parsed = parse_config_text(config_text);
    const std::uint32_t expect_flags = parsed.compression == Compression::Pq ? kFlagPq : 0U;
    if (flags != expect_flags) {
        fail(ErrorCode::Corrupt, "index flags disagree with its config");
    }

    st->config.compression = parsed.compression;
    st->config.selection = parsed.selection;
    st->config.codebooks_path = parsed.codebooks_path;
    if (parsed.compression == Compression::Pq) {
        if (!codebooks) {
            std::filesystem::path cb_path = parsed.codebooks_path;
            if (cb_path.is_relative()) {
                cb_path = path.parent_path() / cb_path;
            }
            codebooks = std::make_shared<const PqCodebooks>(load_codebooks(cb_path));
        }
        if (crc32(serialize_codebooks(*codebooks)) != parsed.codebooks_crc) {
            fail(ErrorCode::Corrupt, "codebooks do not match the ones the index was built with");
        }
        if (codebooks->sub_dim() != parsed.sub_dim) {
            fail(ErrorCode::Corrupt, "codebook subspace dimension disagrees with the index config");
        }
        st->config.codebooks = std::move(codebooks);
    }

    // section 1: descriptors
    verify_section_crc(fd, s1, s2, "descriptor section");
    {
        const auto sec = read_at(fd, s1, s2 - s1 - 4);
        ByteReader r(sec);
        st->global_dim = r.u32();
        if (count > 0 && st->global_dim == 0) {
            fail(ErrorCode::Corrupt, "descriptor dimension is zero");
        }
        st->ids.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::string id = r.str();
            r.need(st->global_dim * 4);
            for (std::size_t j = 0; j < st->global_dim; ++j) {
                st->globals.push_back(r.f32());
            }
            if (!st->by_id.emplace(id, i).second) {
                fail(ErrorCode::Corrupt, "duplicate id '" + id + "' in index");
            }
            st->ids.push_back(std::move(id));
        }
        if (r.remaining() != 0) {
            fail(ErrorCode::Corrupt, "descriptor section has trailing bytes");
        }
    }

    // section 2 is only checksummed here; blocks are parsed through the TOC
    verify_section_crc(fd, s2, s3, "token section");

    // section 3: table of contents
    verify_section_crc(fd, s3, footer_at, "table of contents");
    {
        const auto sec = read_at(fd, s3, footer_at - s3 - 4);
        ByteReader r(sec);
        st->blocks.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const std::string id = r.str();
            if (id != st->ids[i]) {
                fail(ErrorCode::Corrupt, "table of contents disagrees with the descriptor section");
            }
            st->blocks[i].offset = r.u64();
        }
        if (r.remaining() != 0) {
            fail(ErrorCode::Corrupt, "table of contents has trailing bytes");
        }
    }

    const std::uint64_t blocks_end = s3 - 4;
    auto& rep = st->report;
    rep.images = count;
    rep.per_image.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto& b = st->blocks[i];
        const std::uint64_t next = i + 1 < count ? st->blocks[i + 1].offset : blocks_end;
        const std::uint64_t expect_start = i == 0 ? s2 : st->blocks[i - 1].offset + st->blocks[i - 1].size;
        if (b.offset != expect_start || next <= b.offset || next > blocks_end) {
            fail(ErrorCode::Corrupt, "token block offsets are inconsistent");
        }
        b.size = next - b.offset;
        const std::uint64_t id_len = st->ids[i].size();
        const std::uint64_t prefix = 4 + id_len + kBlockFixedBytes;
        if (b.size < prefix) {
            fail(ErrorCode::Corrupt, "token block is too short");
        }
        const auto head = read_at(fd, b.offset, prefix);
        ByteReader r(head);
        if (r.str() != st->ids[i]) {
            fail(ErrorCode::Corrupt, "token block id mismatch");
        }
        b.rows = r.u16();
        b.cols = r.u16();
        b.tokens = r.u32();
        b.dim = r.u32();
        const auto kind = r.u8();
        if (kind != static_cast<std::uint8_t>(parsed.compression) || b.tokens == 0 || b.dim == 0) {
            fail(ErrorCode::Corrupt, "token block header is invalid");
        }
        std::uint64_t payload = 0;
        if (parsed.compression == Compression::Fp16) {
            payload = fp16_payload_bytes(b.tokens, b.dim);
        } else {
            if (b.dim != st->config.codebooks->dim()) {
                fail(ErrorCode::Corrupt, "token block dimension disagrees with the codebooks");
            }
            payload = pq_payload_bytes(b.tokens, b.dim, parsed.sub_dim);
        }
        const std::uint64_t positions = 4ULL * b.tokens;
        if (prefix + payload + positions != b.size) {
            fail(ErrorCode::Corrupt, "token block size does not match its header");
        }

        auto& img = rep.per_image[i];
        img.global = 4ULL * st->global_dim;
        img.payload = payload;
        img.positions = positions;
        img.metadata = (4 + id_len) + prefix + (4 + id_len + 8);
        rep.totals.global += img.global;
        rep.totals.payload += img.payload;
        rep.totals.positions += img.positions;
        rep.totals.metadata += img.metadata;
    }
    rep.file_bytes = file_size;
    rep.file_overhead = file_size - rep.totals.total();
    if (count > 0) {
        rep.mean_per_image = {rep.totals.global / count, rep.totals.payload / count, rep.totals.positions / count,
                              rep.totals.metadata / count};
    }
    return Index(std::move(st));
}

std::size_t
Index::size() const noexcept {
    return state_->ids.size();
}

const IndexConfig&
Index::config() const noexcept {
    return state_->config;
}

std::size_t
Index::global_dim() const noexcept {
    return state_->global_dim;
}

const std::vector<std::string>&
Index::ids() const noexcept {
    return state_->ids;
}

std::span<const float>
Index::globals() const noexcept {
    return state_->globals;
}

std::span<const float>
Index::global(std::size_t i) const noexcept {
    return std::span<const float>(state_->globals).subspan(i * state_->global_dim, state_->global_dim);
}

bool
Index::contains(const std::string& image_id) const {
    return state_->by_id.count(image_id) != 0;
}

IndexEntry
Index::fetch_entry(const std::string& image_id) const {
    std::size_t i = 0;
    const auto& b = state_->block(image_id, &i);
    const auto bytes = read_at(state_->fd.get(), b.offset, b.size);
    ByteReader r(bytes);
    IndexEntry entry;
    entry.image_id = r.str();
    if (entry.image_id != image_id) {
        fail(ErrorCode::Corrupt, "token block id mismatch");
    }
    entry.grid_rows = r.u16();
    entry.grid_cols = r.u16();
    const std::size_t m = r.u32();
    entry.token_dim = r.u32();
    r.u8();
    if (state_->config.compression == Compression::Fp16) {
        std::vector<std::uint16_t> halves(m * entry.token_dim);
        for (auto& h : halves) {
            h = r.u16();
        }
        entry.payload = std::move(halves);
    } else {
        PqCodes codes;
        codes.num_tokens = m;
        codes.num_subspaces = state_->config.codebooks->num_subspaces();
        auto raw = r.bytes(m * codes.num_subspaces);
        codes.codes.assign(raw.begin(), raw.end());
        entry.payload = std::move(codes);
    }
    entry.positions.resize(m);
    for (auto& p : entry.positions) {
        p.row = r.u16();
        p.col = r.u16();
    }
    auto g = global(i);
    entry.global.assign(g.begin(), g.end());
    return entry;
}

TokenGrid
Index::fetch_tokens(const std::string& image_id) const {
    auto entry = fetch_entry(image_id);
    std::vector<float> tokens;
    if (auto* halves = std::get_if<std::vector<std::uint16_t>>(&entry.payload)) {
        tokens = from_half(*halves);
    } else {
        tokens = reconstruct(std::get<PqCodes>(entry.payload), *state_->config.codebooks);
    }
    try {
        return TokenGrid(std::move(tokens), entry.token_dim, std::move(entry.positions), entry.grid_rows,
                         entry.grid_cols);
    } catch (const Error& e) {
        fail(ErrorCode::Corrupt, std::string("stored grid is invalid: ") + e.what());
    }
}

MemoryReport
Index::memory_report() const {
    return state_->report;
}

}  // namespace tokenrank
