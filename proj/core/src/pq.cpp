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

#include "tokenrank/pq.hpp"

#include <algorithm>

#include "tokenrank/bytes.hpp"
#include "tokenrank/error.hpp"
#include "tokenrank/kmeans.hpp"
#include "tokenrank/parallel.hpp"

namespace tokenrank {

namespace {

constexpr std::string_view kCodebookMagic = "PQCB";
constexpr std::uint16_t kCodebookVersion = 1;

void
check_shape(std::size_t dim, std::size_t sub_dim, std::size_t num_centroids) {
    if (dim == 0 || sub_dim == 0) {
        fail(ErrorCode::InvalidArgument, "PQ dimensions must be positive");
    }
    if (dim % sub_dim != 0) {
        fail(ErrorCode::IndivisibleDimension,
             "D=" + std::to_string(dim) + " is not divisible by d=" + std::to_string(sub_dim));
    }
    if (num_centroids == 0 || num_centroids > PqCodebooks::kMaxCentroids) {
        fail(ErrorCode::InvalidArgument, "K must be in [1, 256], got " + std::to_string(num_centroids));
    }
}

}  // namespace

PqCodebooks::PqCodebooks(std::size_t dim,
                         std::size_t sub_dim,
                         std::size_t num_centroids,
                         std::uint64_t trained_on,
                         std::vector<float> centroids)
    : dim_(dim),
      sub_dim_(sub_dim),
      num_centroids_(num_centroids),
      trained_on_(trained_on),
      centroids_(std::move(centroids)) {
    check_shape(dim_, sub_dim_, num_centroids_);
    if (centroids_.size() != num_subspaces() * num_centroids_ * sub_dim_) {
        fail(ErrorCode::InvalidArgument, "centroid buffer does not match (D/d) x K x d");
    }
}

PqCodebooks
train_codebooks(std::span<const float> vectors, std::size_t dim, const PqTrainParams& params) {
    check_shape(dim, params.sub_dim, params.num_centroids);
    if (vectors.size() % dim != 0) {
        fail(ErrorCode::DimensionMismatch, "training buffer is not a multiple of D");
    }
    const std::size_t n = vectors.size() / dim;
    if (n < params.num_centroids) {
        fail(ErrorCode::TooFewVectors,
             std::to_string(n) + " training vectors for K=" + std::to_string(params.num_centroids));
    }

    const std::size_t d = params.sub_dim;
    const std::size_t k = params.num_centroids;
    const std::size_t subspaces = dim / d;
    std::vector<float> centroids(subspaces * k * d);

    parallel_for(subspaces, params.jobs, [&](std::size_t s) {
        std::vector<float> slice(n * d);
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(vectors.begin() + static_cast<std::ptrdiff_t>(i * dim + s * d), d,
                        slice.begin() + static_cast<std::ptrdiff_t>(i * d));
        }
        KMeansParams km;
        km.num_clusters = k;
        km.max_iterations = params.max_iterations;
        km.seed = params.seed + s;
        auto result = kmeans(slice, n, d, km);
        std::copy(result.centroids.begin(), result.centroids.end(),
                  centroids.begin() + static_cast<std::ptrdiff_t>(s * k * d));
    });

    return PqCodebooks(dim, d, k, n, std::move(centroids));
}

PqCodes
encode(std::span<const float> vectors, const PqCodebooks& codebooks) {
    const std::size_t dim = codebooks.dim();
    if (vectors.size() % dim != 0) {
        fail(ErrorCode::DimensionMismatch,
             "vector buffer is not a multiple of the codebook dimension " + std::to_string(dim));
    }
    PqCodes out;
    out.num_tokens = vectors.size() / dim;
    out.num_subspaces = codebooks.num_subspaces();
    out.codes.resize(out.num_tokens * out.num_subspaces);
    const std::size_t d = codebooks.sub_dim();
    for (std::size_t m = 0; m < out.num_tokens; ++m) {
        for (std::size_t s = 0; s < out.num_subspaces; ++s) {
            auto sub = vectors.subspan(m * dim + s * d, d);
            out.codes[m * out.num_subspaces + s] =
                static_cast<std::uint8_t>(nearest_centroid(sub, codebooks.subspace(s), d));
        }
    }
    return out;
}

PqCodes
encode(const TokenGrid& grid, const PqCodebooks& codebooks) {
    if (grid.dim() != codebooks.dim()) {
        fail(ErrorCode::DimensionMismatch,
             "grid D=" + std::to_string(grid.dim()) + " vs codebook D=" + std::to_string(codebooks.dim()));
    }
    return encode(grid.tokens(), codebooks);
}

std::vector<float>
reconstruct(const PqCodes& codes, const PqCodebooks& codebooks) {
    if (codes.num_subspaces != codebooks.num_subspaces() ||
        codes.codes.size() != codes.num_tokens * codes.num_subspaces) {
        fail(ErrorCode::DimensionMismatch, "codes do not match the codebook layout");
    }
    const std::size_t d = codebooks.sub_dim();
    std::vector<float> out;
    out.reserve(codes.num_tokens * codebooks.dim());
    for (std::size_t m = 0; m < codes.num_tokens; ++m) {
        auto r = codes.row(m);
        for (std::size_t s = 0; s < codes.num_subspaces; ++s) {
            if (r[s] >= codebooks.num_centroids()) {
                fail(ErrorCode::CodeOutOfRange,
                     "code " + std::to_string(r[s]) + " >= K=" + std::to_string(codebooks.num_centroids()));
            }
            auto c = codebooks.centroid(s, r[s]);
            out.insert(out.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(d));
        }
    }
    return out;
}

double
mean_reconstruction_error(std::span<const float> vectors, const PqCodebooks& codebooks) {
    const auto codes = encode(vectors, codebooks);
    if (codes.num_tokens == 0) {
        return 0.0;
    }
    const auto approx = reconstruct(codes, codebooks);
    return squared_distance(vectors, approx) / static_cast<double>(codes.num_tokens);
}

std::vector<std::uint8_t>
serialize_codebooks(const PqCodebooks& codebooks) {
    ByteWriter w;
    w.raw(kCodebookMagic);
    w.u16(kCodebookVersion);
    w.u32(static_cast<std::uint32_t>(codebooks.dim()));
    w.u32(static_cast<std::uint32_t>(codebooks.sub_dim()));
    w.u32(static_cast<std::uint32_t>(codebooks.num_centroids()));
    w.u64(codebooks.trained_on());
    for (float v : codebooks.centroids()) {
        w.f32(v);
    }
    return w.take();
}

PqCodebooks
deserialize_codebooks(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    if (bytes.size() < 4 || r.raw(4) != kCodebookMagic) {
        fail(ErrorCode::BadMagic, "not a PQ codebook file");
    }
    if (r.u16() != kCodebookVersion) {
        fail(ErrorCode::UnsupportedVersion, "unsupported codebook version");
    }
    const std::size_t dim = r.u32();
    const std::size_t sub_dim = r.u32();
    const std::size_t k = r.u32();
    const std::uint64_t trained_on = r.u64();
    if (dim == 0 || sub_dim == 0 || dim % sub_dim != 0 || k == 0 || k > PqCodebooks::kMaxCentroids) {
        fail(ErrorCode::Corrupt, "codebook header has an impossible shape");
    }
    const std::size_t count = (dim / sub_dim) * k * sub_dim;
    if (r.remaining() != count * 4) {
        fail(ErrorCode::Corrupt, "codebook payload size mismatch");
    }
    std::vector<float> centroids(count);
    for (auto& v : centroids) {
        v = r.f32();
    }
    return PqCodebooks(dim, sub_dim, k, trained_on, std::move(centroids));
}

void
save_codebooks(const std::filesystem::path& path, const PqCodebooks& codebooks) {
    write_file_atomic(path, serialize_codebooks(codebooks));
}

PqCodebooks
load_codebooks(const std::filesystem::path& path) {
    return deserialize_codebooks(read_file(path));
}

}  // namespace tokenrank
