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

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "tokenrank/bytes.hpp"
#include "tokenrank/half.hpp"

namespace {

using namespace tokenrank;

TEST(Dump, SerializeRoundTripsThroughHalf) {
    std::mt19937_64 rng(3);
    const auto g = testkit::random_grid(rng, 3, 5, 7);
    const auto bytes = serialize_dump(g);
    EXPECT_EQ(bytes.size(), 4u + 2 + 4 + 4 + 2 + 2 + 15 * 4 + 15 * 7 * 2);
    const auto back = deserialize_dump(bytes);
    EXPECT_EQ(back, round_grid_to_half(g));
    EXPECT_EQ(back.positions()[7], g.positions()[7]);
}

TEST(Dump, HeaderErrors) {
    std::mt19937_64 rng(3);
    auto bytes = serialize_dump(testkit::random_grid(rng, 2, 2, 4));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_TR_ERROR(deserialize_dump(bad_magic), ErrorCode::BadMagic);
    auto bad_version = bytes;
    bad_version[4] = 9;
    EXPECT_TR_ERROR(deserialize_dump(bad_version), ErrorCode::UnsupportedVersion);
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_TR_ERROR(deserialize_dump(truncated), ErrorCode::Corrupt);
    EXPECT_TR_ERROR(deserialize_dump(std::vector<std::uint8_t>{'T', 'K'}), ErrorCode::BadMagic);
}

TEST(Dump, GlobalSidecar) {
    const std::vector<float> v = {0.6f, 0.8f};
    const auto b = serialize_global(v);
    EXPECT_EQ(deserialize_global(b), v);
    auto t = b;
    t.pop_back();
    EXPECT_TR_ERROR(deserialize_global(t), ErrorCode::Corrupt);
}

TEST(Dump, DirectoryRoundTrip) {
    testkit::TempDir dir;
    std::mt19937_64 rng(9);
    for (const char* id : {"b", "a", "c"}) {
        write_dump(dir.path(), {id, GlobalDescriptor::normalized({1.0f, 2.0f, 2.0f}), testkit::random_grid(rng, 2, 3, 4)});
    }
    const auto recs = load_dump_dir(dir.path());
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].image_id, "a");
    EXPECT_EQ(recs[2].image_id, "c");
    EXPECT_EQ(read_dump(dir.path(), "b").grid, recs[1].grid);
    std::filesystem::remove(dir / "c.glob");
    EXPECT_TR_ERROR(load_dump_dir(dir.path()), ErrorCode::IoFailure);
    EXPECT_TR_ERROR(load_dump_dir(dir / "missing"), ErrorCode::IoFailure);
}

TEST(Dump, RejectsBadIdOnWrite) {
    testkit::TempDir dir;
    std::mt19937_64 rng(1);
    EXPECT_TR_ERROR(write_dump(dir.path(), {"a,b", GlobalDescriptor({1.0f}), testkit::random_grid(rng, 1, 1, 2)}),
                    ErrorCode::InvalidArgument);
}

}  // namespace
