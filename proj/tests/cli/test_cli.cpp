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


// End-to-end runs of the tokenrank executable: exit codes, file outputs,
// configuration overlay and the remote scorer against the stub service.

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "cli_runner.hpp"
#include "commands.hpp"
#include "csv_io.hpp"
#include "oracles.hpp"
#include "stub_service.hpp"
#include "tokenrank/dump.hpp"

namespace {

using namespace tokenrank;
using testkit::run_cli;
using testkit::slurp;

std::size_t
count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class Cli : public ::testing::Test {
protected:
    static void
    SetUpTestSuite() {
        dir_ = std::make_unique<testkit::TempDir>("tokenrank-cli");
        const auto r = run_cli({"synth", "--out", path("corpus"), "--images", "3"}, dir_->path());
        ASSERT_EQ(r.exit_code, 0) << r.err;
        const auto b = run_cli({"build-index", "--dumps", path("corpus/db"), "--out", path("fp16.tkix")}, dir_->path());
        ASSERT_EQ(b.exit_code, 0) << b.err;
        const auto s = run_cli({"search", "--index", path("fp16.tkix"), "--queries", path("corpus/queries"), "--k", "20",
                                "--out", path("short.csv")},
                               dir_->path());
        ASSERT_EQ(s.exit_code, 0) << s.err;
    }
    static void
    TearDownTestSuite() {
        dir_.reset();
    }

    static std::string
    path(const std::string& rel) {
        return (dir_->path() / rel).string();
    }

    testkit::CliResult
    run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {}) {
        std::map<std::string, std::string> e = env;
        e.try_emplace(kEndpointEnv, "");
        return run_cli(args, dir_->path(), e);
    }

    std::vector<std::string>
    rerank_args(const std::string& out) {
        return {"rerank", "--index", path("fp16.tkix"), "--shortlists", path("short.csv"), "--queries",
                path("corpus/queries"), "--out", out};
    }

    static std::unique_ptr<testkit::TempDir> dir_;
};

std::unique_ptr<testkit::TempDir> Cli::dir_;

TEST_F(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).exit_code, 1);
    EXPECT_EQ(run({"bogus"}).exit_code, 1);
    EXPECT_EQ(run({"search", "--index", path("fp16.tkix")}).exit_code, 1);
    EXPECT_EQ(run({"search", "--index", path("fp16.tkix"), "--queries", path("corpus/queries"), "--k", "0"}).exit_code, 1);
    EXPECT_EQ(run({"rerank", "--lambda", "2"}).exit_code, 1);
    EXPECT_EQ(run({"inspect", "--index", path("fp16.tkix"), "--unknown"}).exit_code, 1);
    const auto help = run({"--help"});
    EXPECT_EQ(help.exit_code, 0);
    EXPECT_NE(help.out.find("rerank"), std::string::npos);
}

TEST_F(Cli, SynthWritesCorpus) {
    EXPECT_EQ(load_dump_dir(path("corpus/db")).size(), 200u);
    EXPECT_EQ(load_dump_dir(path("corpus/queries")).size(), 20u);
    EXPECT_TRUE(std::filesystem::exists(path("corpus/qrels.tsv")));
    EXPECT_TRUE(std::filesystem::exists(path("corpus/images/img002.png")));
}

TEST_F(Cli, SearchRerankEvalChain) {
    const auto shortlist = slurp(path("short.csv"));
    EXPECT_EQ(count_lines(shortlist), 1u + 20u * 20u);
    EXPECT_EQ(shortlist.substr(0, shortlist.find('\n')), "query_id,rank,image_id,s_g");

    const auto r = run(rerank_args(path("ranked.csv")));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto ranked = cli::load_ranked_csv(path("ranked.csv"));
    ASSERT_EQ(ranked.size(), 20u);
    for (const auto& l : ranked) {
        EXPECT_EQ(l.items.size(), 20u);
        EXPECT_TRUE(is_sorted_by_active_score(l));
        for (const auto& it : l.items) {
            EXPECT_NEAR(*it.s_fused, 0.5 * (it.s_global + 1.0) / 2.0 + 0.5 * *it.s_rerank, 1e-15);
        }
    }

    const auto e = run({"eval", "--ranked", path("ranked.csv"), "--qrels", path("corpus/qrels.tsv"), "--k", "20",
                        "--groups"});
    ASSERT_EQ(e.exit_code, 0) << e.err;
    EXPECT_EQ(e.out.rfind("summary,20,", 0), 0u);
    EXPECT_EQ(count_lines(e.out), 1u + 20u + 2u);
    EXPECT_NE(e.out.find("group,misleading,"), std::string::npos);
    EXPECT_NE(e.out.find("group,clean,"), std::string::npos);
}

TEST_F(Cli, StdoutWhenNoOutFile) {
    const auto r = run({"search", "--index", path("fp16.tkix"), "--queries", path("corpus/queries"), "--k", "3"});
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(count_lines(r.out), 1u + 20u * 3u);
}

TEST_F(Cli, DataErrorsExitTwo) {
    EXPECT_EQ(run({"inspect", "--index", path("missing.tkix")}).exit_code, 2);
    auto bytes = slurp(path("fp16.tkix"));
    bytes[bytes.size() / 2] ^= 0x5A;
    std::ofstream(path("broken.tkix"), std::ios::binary) << bytes;
    const auto c = run({"inspect", "--index", path("broken.tkix")});
    EXPECT_EQ(c.exit_code, 2);
    EXPECT_NE(c.err.find("Corrupt"), std::string::npos);
    EXPECT_EQ(run({"build-index", "--dumps", path("corpus/db"), "--compression", "pq", "--codebooks", path("nope.pq"),
                   "--out", path("x.tkix")})
                  .exit_code,
              2);
    EXPECT_EQ(run({"build-index", "--dumps", path("corpus/db"), "--select", "prune:zero", "--out", path("x.tkix")})
                  .exit_code,
              2);
    std::ofstream(path("alien.csv")) << "query_id,rank,image_id,s_g\nq00,1,not_there,0.5\n";
    auto args = rerank_args(path("alien_out.csv"));
    args[4] = path("alien.csv");
    EXPECT_EQ(run(args).exit_code, 2);
    EXPECT_FALSE(std::filesystem::exists(path("alien_out.csv")));
    EXPECT_EQ(run({"eval", "--ranked", path("short.csv"), "--qrels", path("missing.tsv")}).exit_code, 2);
}

TEST_F(Cli, UnreachableEndpointExitsThreeWithoutOutput) {
    auto args = rerank_args(path("remote_dead.csv"));
    for (const char* extra : {"--scorer", "remote", "--endpoint", "http://127.0.0.1:1", "--retries", "0"}) {
        args.push_back(extra);
    }
    const auto r = run(args);
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.err.find("ServiceError"), std::string::npos);
    EXPECT_FALSE(std::filesystem::exists(path("remote_dead.csv")));
}

TEST_F(Cli, RemoteScorerThroughStub) {
    testkit::StubBehavior b;
    b.dim = 32;
    testkit::StubService stub(b);
    auto args = rerank_args(path("remote.csv"));
    args.push_back("--scorer");
    args.push_back("remote");
    args.push_back("--batch-size");
    args.push_back("7");
    const auto r = run(args, {{kEndpointEnv, stub.endpoint()}});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto ranked = cli::load_ranked_csv(path("remote.csv"));
    std::map<std::string, ImageRecord> queries;
    for (auto& q : load_dump_dir(path("corpus/queries"))) {
        queries.emplace(q.image_id, std::move(q));
    }
    for (const auto& l : ranked) {
        for (const auto& it : l.items) {
            const auto cand = read_dump(path("corpus/db"), it.image_id);
            const auto [l0, l1] = testkit::stub_logits(queries.at(l.query_id).grid, cand.grid);
            EXPECT_NEAR(*it.s_rerank, testkit::ref_two_token(l1, l0), 1e-12);
        }
    }
    // 20 candidates per query in requests of at most 7
    EXPECT_EQ(stub.score_requests(), 20 * 3);
}

TEST_F(Cli, RemoteProtocolProblemsExitThree) {
    for (int variant = 0; variant < 2; ++variant) {
        testkit::StubBehavior b;
        b.dim = variant == 0 ? 16 : 32;
        b.score_status = variant == 1 ? 409 : 0;
        testkit::StubService stub(b);
        auto args = rerank_args(path("remote_bad.csv"));
        for (const auto& extra : {std::string("--scorer"), std::string("remote"), std::string("--endpoint"), stub.endpoint()}) {
            args.push_back(extra);
        }
        const auto r = run(args);
        EXPECT_EQ(r.exit_code, 3) << variant;
        EXPECT_NE(r.err.find("ProtocolMismatch"), std::string::npos) << r.err;
        EXPECT_FALSE(std::filesystem::exists(path("remote_bad.csv")));
    }
}

TEST_F(Cli, ConfigFileOverlay) {
    std::ofstream(path("global_only.toml")) << "jobs = 2\n[rerank]\nlambda = 0.0\n";
    auto args = rerank_args(path("cfg.csv"));
    args.insert(args.begin(), {"--config", path("global_only.toml")});
    ASSERT_EQ(run(args).exit_code, 0);
    // lambda 0 keeps the first-stage order
    const auto ranked = cli::load_ranked_csv(path("cfg.csv"));
    const auto shortlist = cli::load_ranked_csv(path("short.csv"));
    std::map<std::string, std::vector<std::string>> want;
    for (const auto& l : shortlist) {
        for (const auto& it : l.items) {
            want[l.query_id].push_back(it.image_id);
        }
    }
    for (const auto& l : ranked) {
        std::vector<std::string> got;
        for (const auto& it : l.items) {
            got.push_back(it.image_id);
        }
        EXPECT_EQ(got, want[l.query_id]);
    }

    // command-line flags win over the file
    args.push_back("--lambda");
    args.push_back("1.0");
    const auto v = run([&] {
        auto a = args;
        a.insert(a.begin(), "--verbose");
        return a;
    }());
    ASSERT_EQ(v.exit_code, 0) << v.err;
    EXPECT_NE(v.err.find("rerank.lambda=1"), std::string::npos) << v.err;
    EXPECT_NE(v.err.find("jobs=2"), std::string::npos);
    EXPECT_EQ(v.err.find("search.k="), std::string::npos);

    std::ofstream(path("bad.toml")) << "[rerank]\nlambada = 0.3\n";
    auto bad = rerank_args(path("cfg_bad.csv"));
    bad.insert(bad.begin(), {"--config", path("bad.toml")});
    EXPECT_EQ(run(bad).exit_code, 1);
}

TEST_F(Cli, TrainPqAndInspect) {
    const auto t = run({"train-pq", "--dumps", path("corpus/db"), "--d", "4", "--k", "64", "--seed", "1", "--max-iter",
                        "20", "--out", path("cb4.pq")});
    ASSERT_EQ(t.exit_code, 0) << t.err;
    EXPECT_NE(t.out.find("mean_reconstruction_error="), std::string::npos);
    EXPECT_EQ(run({"train-pq", "--dumps", path("corpus/db"), "--d", "5", "--out", path("cb5.pq")}).exit_code, 2);
    const auto b = run({"build-index", "--dumps", path("corpus/db"), "--compression", "pq", "--codebooks",
                        path("cb4.pq"), "--out", path("pq4.tkix")});
    ASSERT_EQ(b.exit_code, 0) << b.err;
    const auto i = run({"inspect", "--index", path("pq4.tkix"), "--per-image"});
    ASSERT_EQ(i.exit_code, 0) << i.err;
    EXPECT_NE(i.out.find("compression=pq"), std::string::npos);
    EXPECT_NE(i.out.find("images=200"), std::string::npos);
    // 16 tokens x 32/4 one-byte codes
    EXPECT_NE(i.out.find("\nmean,256,128,64,"), std::string::npos) << i.out;
    EXPECT_NE(i.out.find("\nimg_g00_00,256,128,64,"), std::string::npos);
}

TEST_F(Cli, RobustnessCurve) {
    const auto r = run({"robustness", "--images", path("corpus/images"), "--kind", "occlusion", "--n", "5",
                        "--baseline", "0.8", "--out", path("curve.csv")});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto csv = slurp(path("curve.csv"));
    EXPECT_EQ(csv.rfind("# kind=occlusion n=5 seed=0 scorer=mock-chamfer-v1\nfactor,mean_similarity\n0,", 0), 0u) << csv;
    EXPECT_EQ(count_lines(csv), 7u);
    EXPECT_NE(r.out.find("baseline=0.80000000000000004 crossing="), std::string::npos) << r.out;
    EXPECT_EQ(run({"robustness", "--images", path("nowhere"), "--kind", "blur"}).exit_code, 2);
    EXPECT_EQ(run({"robustness", "--images", path("corpus/images"), "--kind", "sepia"}).exit_code, 1);
}

TEST_F(Cli, BenchSweep) {
    const auto r = run({"bench", "--index", path("fp16.tkix"), "--queries", path("corpus/queries"), "--k-sweep", "5,10"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("k,queries,mean_s,p50_s,p95_s,min_s,max_s\n5,20,", 0), 0u) << r.out;
    EXPECT_EQ(count_lines(r.out), 3u);
}

TEST(CliInProcess, RunReturnsExitCodes) {
    std::ostringstream out;
    std::ostringstream err;
    const char* argv[] = {"tokenrank", "inspect", "--index", "/nonexistent/x.tkix"};
    EXPECT_EQ(cli::run(4, argv, out, err), cli::kExitData);
    EXPECT_NE(err.str().find("IoFailure"), std::string::npos);
    const char* none[] = {"tokenrank"};
    EXPECT_EQ(cli::run(1, none, out, err), cli::kExitUsage);
}

}  // namespace
