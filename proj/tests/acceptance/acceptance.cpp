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


// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "stub_service.hpp"
#include "tokenrank/dump.hpp"
#include "tokenrank/error.hpp"
#include "tokenrank/eval.hpp"
#include "tokenrank/half.hpp"
#include "tokenrank/image.hpp"
#include "tokenrank/index.hpp"
#include "tokenrank/pq.hpp"
#include "tokenrank/qrels.hpp"
#include "tokenrank/remote.hpp"
#include "tokenrank/rerank.hpp"
#include "tokenrank/robustness.hpp"
#include "tokenrank/scorer.hpp"
#include "tokenrank/similarity.hpp"
#include "tokenrank/synthetic.hpp"
#include "tokenrank/tokensel.hpp"
#include "tokenrank/transforms.hpp"

namespace {

using namespace tokenrank;
namespace tk = tokenrank::testkit;
namespace fs = std::filesystem;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void
require(bool ok, const std::string& what) {
    if (!ok) {
        throw Failure(what);
    }
}

template <typename Fn>
void
require_error(Fn&& fn, std::initializer_list<ErrorCode> allowed, const std::string& what) {
    try {
        fn();
    } catch (const Error& e) {
        require(std::find(allowed.begin(), allowed.end(), e.code()) != allowed.end(),
                what + ": unexpected error " + e.what());
        return;
    }
    throw Failure(what + ": no error raised");
}

std::vector<float>
gaussian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<float> g(0.0f, 1.0f);
    std::vector<float> v(n);
    for (auto& x : v) {
        x = g(rng);
    }
    return v;
}

ImageRecord
random_record(std::mt19937_64& rng, const std::string& id, std::uint16_t rows, std::uint16_t cols, std::size_t dim) {
    auto grid = TokenGrid::dense(gaussian(rng, static_cast<std::size_t>(rows) * cols * dim), dim, rows, cols);
    return {id, GlobalDescriptor::normalized(gaussian(rng, 8)), std::move(grid)};
}

// ---------------------------------------------------------------- AC1

void
ac1_storage_laws() {
    constexpr std::size_t kM = 300;
    constexpr std::size_t kD = 3584;
    tk::TempDir dir("tokenrank-ac1");
    std::mt19937_64 rng(1);
    const std::vector<ImageRecord> one{random_record(rng, "img", 15, 20, kD)};

    build_index(one, IndexConfig::fp16(), dir / "fp16.tkix", 1);
    const auto fp16 = Index::open(dir / "fp16.tkix").memory_report();
    require(fp16.per_image.at(0).payload == 2'150'400, "fp16 payload " + std::to_string(fp16.per_image[0].payload));
    require(fp16.per_image[0].payload == 2 * kM * kD, "fp16 law");

    for (std::size_t d : {4, 8, 16, 32, 64, 128}) {
        auto cb = std::make_shared<const PqCodebooks>(kD, d, 16, 0, gaussian(rng, 16 * kD));
        const auto name = "pq" + std::to_string(d);
        save_codebooks(dir / (name + ".pq"), *cb);
        build_index(one, IndexConfig::pq(cb, name + ".pq"), dir / (name + ".tkix"), 1);
        const auto rep = Index::open(dir / (name + ".tkix")).memory_report();
        require(rep.per_image.at(0).payload == kM * kD / d,
                "pq d=" + std::to_string(d) + " payload " + std::to_string(rep.per_image[0].payload));
    }
}

// ---------------------------------------------------------------- AC2

void
ac2_pq_oracle() {
    constexpr std::size_t kD = 16;
    std::mt19937_64 rng(2);
    std::size_t checked = 0;
    for (std::size_t d : {2, 4}) {
        for (std::size_t k : {1, 3, 16}) {
            for (bool integral : {false, true}) {
                std::vector<float> vectors = gaussian(rng, 1000 * kD);
                std::vector<float> cents = gaussian(rng, (kD / d) * k * d);
                if (integral) {
                    for (auto& v : vectors) {
                        v = std::round(v);
                    }
                    for (auto& v : cents) {
                        v = std::round(v);
                    }
                }
                const PqCodebooks cb(kD, d, k, 0, cents);
                const auto codes = encode(vectors, cb);
                require(codes.num_tokens == 1000 && codes.num_subspaces == kD / d, "code shape");
                for (std::size_t i = 0; i < 1000; ++i) {
                    for (std::size_t s = 0; s < kD / d; ++s) {
                        const auto want = tk::ref_nearest(&vectors[i * kD + s * d], &cents[s * k * d], k, d);
                        require(codes.row(i)[s] == want, "encode mismatch at vector " + std::to_string(i));
                        ++checked;
                    }
                }
            }
        }
    }
    require(checked > 0, "nothing checked");

    const auto corpus = make_synthetic_corpus();
    std::vector<float> tokens;
    for (const auto& r : corpus.database) {
        tokens.insert(tokens.end(), r.grid.tokens().begin(), r.grid.tokens().end());
    }
    const std::size_t dim = corpus.database.front().grid.dim();
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t d : {8, 4, 2, 1}) {
        const auto cb = train_codebooks(tokens, dim, {d, 16, 5, 50, 1});
        const double err = mean_reconstruction_error(tokens, cb);
        require(err < prev, "reconstruction error not decreasing at d=" + std::to_string(d));
        prev = err;
    }
}

// ---------------------------------------------------------------- AC3

void
ac3_divprune_oracle() {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const std::uint16_t n = static_cast<std::uint16_t>(1 + rng() % 10);
        const std::size_t m = 1 + rng() % std::min<std::size_t>(5, n);
        const std::size_t dim = 1 + rng() % 4;
        const auto grid = tk::random_grid(rng, 1, n, dim, trial % 2 == 1);
        const std::vector<float> rows(grid.tokens().begin(), grid.tokens().end());
        const auto want = tk::ref_divprune(rows, n, dim, m);
        const auto got = prune_divprune(grid, m);
        std::vector<std::size_t> picked;
        for (const auto& p : got.positions()) {
            picked.push_back(p.col);
        }
        require(picked == want, "trial " + std::to_string(trial));
        for (std::size_t i = 0; i < picked.size(); ++i) {
            require(std::equal(got.token(i).begin(), got.token(i).end(), grid.token(picked[i]).begin()),
                    "vectors not carried over");
        }
    }
}

// ---------------------------------------------------------------- AC4

void
ac4_window_counts() {
    std::mt19937_64 rng(4);
    for (std::uint16_t r = 1; r <= 9; ++r) {
        for (std::uint16_t c = 1; c <= 9; ++c) {
            const auto want = static_cast<std::size_t>(std::ceil(r / 2.0) * std::ceil(c / 2.0));
            const auto grid = tk::random_grid(rng, r, c, 3);
            const auto sampled = sample_uniform_2x2(grid);
            const auto pooled = pool_average_2x2(grid);
            const auto tag = std::to_string(r) + "x" + std::to_string(c);
            require(sampled.size() == want, "sample2x2 " + tag);
            require(pooled.size() == want, "pool2x2 " + tag);
            require(windows_2x2(r, c) == want, "windows_2x2 " + tag);
            if (r % 2 == 0 && c % 2 == 0) {
                require(grid.size() == 4 * want, "even grid factor " + tag);
            }
        }
    }
}

// ---------------------------------------------------------------- AC5

void
ac5_two_token_math() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    std::uniform_real_distribution<double> shift(-500.0, 500.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        const double s = two_token_similarity(a, b);
        require(std::abs(s + two_token_similarity(b, a) - 1.0) <= 1e-12, "complement");
        const double c = shift(rng);
        require(std::abs(two_token_similarity(a + c, b + c) - s) <= 1e-9, "shift invariance");
        require(std::abs(s - tk::ref_two_token(a, b)) <= 1e-12, "stable softmax reference");
    }
    require(std::abs(two_token_similarity(2.0, 0.0) - 0.8807970779778823) <= 1e-12, "closed form point");
    require(std::abs(1.0 / (1.0 + std::exp(-2.0)) - 0.8807970779778823) <= 1e-12, "closed form constant");
}

// ---------------------------------------------------------------- AC6

std::vector<std::string>
order_of(const RankedList& l) {
    std::vector<std::string> ids;
    for (const auto& it : l.items) {
        ids.push_back(it.image_id);
    }
    return ids;
}

void
ac6_map_oracle() {
    std::mt19937_64 rng(6);
    Qrels qrels;
    std::vector<RankedList> lists;
    std::map<std::string, double> want;
    const std::size_t k = 1 + rng() % 100;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::string qid = "q" + std::to_string(trial);
        const std::size_t n = 1 + rng() % 100;
        const std::size_t npos = 1 + rng() % 10;
        std::vector<std::string> universe;
        for (std::size_t i = 0; i < n + 10; ++i) {
            universe.push_back("i" + std::to_string(i));
        }
        std::shuffle(universe.begin(), universe.end(), rng);
        const std::vector<std::string> ranked(universe.begin(), universe.begin() + static_cast<std::ptrdiff_t>(n));
        std::shuffle(universe.begin(), universe.end(), rng);
        const std::set<std::string> pos(universe.begin(), universe.begin() + static_cast<std::ptrdiff_t>(npos));
        for (const auto& p : pos) {
            qrels.add(qid, {p, std::nullopt});
        }
        RankedList l{qid, {}};
        for (const auto& id : ranked) {
            l.items.push_back({id, 0.0, {}, {}});
        }
        lists.push_back(std::move(l));
        want[qid] = tk::ref_average_precision(ranked, pos, k);
        require(std::abs(ap_at_k(ranked, pos, k) - want[qid]) <= 1e-12, "ap_at_k " + qid);
    }
    const auto rep = evaluate(lists, qrels, k);
    double mean = 0.0;
    for (const auto& [qid, ap] : want) {
        require(std::abs(rep.per_query.at(qid) - ap) <= 1e-12, "evaluate " + qid);
        mean += ap;
    }
    require(std::abs(rep.map_at_k - mean / static_cast<double>(want.size())) <= 1e-12, "mean AP");

    // fusion endpoints
    const MockScorer scorer;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto query = tk::random_grid(rng, 3, 3, 8);
        std::map<std::string, TokenGrid> grids;
        Shortlist sl{"q", {}};
        std::vector<TokenGrid> cands;
        for (int i = 0; i < 30; ++i) {
            const std::string id = "c" + std::to_string(i);
            grids.emplace(id, tk::random_grid(rng, 3, 3, 8));
            sl.candidates.push_back({id, u(rng)});
            cands.push_back(grids.at(id));
        }
        const auto s_r = scorer.score_batch(query, cands, PromptId::Object);
        auto by = [&](auto score) {
            std::vector<std::size_t> idx(sl.candidates.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                idx[i] = i;
            }
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return ranks_before(score(a), sl.candidates[a].image_id, score(b), sl.candidates[b].image_id);
            });
            std::vector<std::string> ids;
            for (auto i : idx) {
                ids.push_back(sl.candidates[i].image_id);
            }
            return ids;
        };
        const GridSource source = [&](const std::string& id) { return grids.at(id); };
        RerankOptions opts;
        opts.fusion.lambda = 0.0;
        require(order_of(rerank(sl, source, query, scorer, opts)) ==
                    by([&](std::size_t i) { return sl.candidates[i].s_global; }),
                "lambda 0 is not the global order");
        opts.fusion.lambda = 1.0;
        require(order_of(rerank(sl, source, query, scorer, opts)) == by([&](std::size_t i) { return s_r[i]; }),
                "lambda 1 is not the scorer order");
    }
}

// ---------------------------------------------------------------- AC7 / AC8

struct Corpus {
    std::vector<ImageRecord> db;
    std::vector<ImageRecord> queries;
    std::map<std::string, std::set<std::string>> positives;
};

std::map<std::string, std::set<std::string>>
read_positives(const fs::path& path) {
    std::map<std::string, std::set<std::string>> out;
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string field; std::getline(ls, field, '\t');) {
            f.push_back(field);
        }
        if (f.size() >= 3 && f[2] != "0") {
            out[f[0]].insert(f[1]);
        }
    }
    return out;
}

/// The whole pipeline recomputed from the dumps: exhaustive cosine, top-k,
/// optional Chamfer rerank over `stored` candidate grids, AP averaged.
double
oracle_map(const Corpus& c, std::size_t k, std::optional<double> lambda,
           const std::function<TokenGrid(const TokenGrid&)>& stored) {
    std::map<std::string, TokenGrid> cache;
    double total = 0.0;
    for (const auto& q : c.queries) {
        struct Row {
            std::string id;
            double s;
            const ImageRecord* rec;
        };
        std::vector<Row> rows;
        for (const auto& r : c.db) {
            rows.push_back({r.image_id,
                            tk::ref_dot(q.global.vector().data(), r.global.vector().data(), r.global.dim()), &r});
        }
        auto order = [](const Row& a, const Row& b) { return a.s != b.s ? a.s > b.s : a.id < b.id; };
        std::sort(rows.begin(), rows.end(), order);
        rows.resize(std::min(k, rows.size()));
        if (lambda) {
            for (auto& row : rows) {
                auto it = cache.find(row.id);
                if (it == cache.end()) {
                    it = cache.emplace(row.id, stored(row.rec->grid)).first;
                }
                const double s_r = tk::ref_chamfer(q.grid, it->second);
                row.s = (1.0 - *lambda) * (row.s + 1.0) / 2.0 + *lambda * s_r;
            }
            std::sort(rows.begin(), rows.end(), order);
        }
        std::vector<std::string> ids;
        for (const auto& row : rows) {
            ids.push_back(row.id);
        }
        total += tk::ref_average_precision(ids, c.positives.at(q.image_id), k);
    }
    return total / static_cast<double>(c.queries.size());
}

TokenGrid
half_rounded(const TokenGrid& g) {
    std::vector<float> t(g.tokens().begin(), g.tokens().end());
    for (auto& v : t) {
        v = half_to_float(float_to_half(v));
    }
    return TokenGrid(std::move(t), g.dim(), {g.positions().begin(), g.positions().end()}, g.grid_rows(),
                     g.grid_cols());
}

TokenGrid
pq_rounded(const TokenGrid& g, const PqCodebooks& cb) {
    const std::size_t d = cb.sub_dim();
    const std::size_t k = cb.num_centroids();
    std::vector<float> t;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t s = 0; s < cb.num_subspaces(); ++s) {
            const auto c = tk::ref_nearest(g.token(i).data() + s * d, cb.subspace(s).data(), k, d);
            const auto cent = cb.centroid(s, c);
            t.insert(t.end(), cent.begin(), cent.end());
        }
    }
    return TokenGrid(std::move(t), g.dim(), {g.positions().begin(), g.positions().end()}, g.grid_rows(),
                     g.grid_cols());
}

class Pipeline {
public:
    Pipeline() : dir_("tokenrank-acceptance") {
        cli({"synth", "--out", p("corpus")});
        corpus_.db = load_dump_dir(dir_ / "corpus/db");
        corpus_.queries = load_dump_dir(dir_ / "corpus/queries");
        corpus_.positives = read_positives(dir_ / "corpus/qrels.tsv");
        require(corpus_.db.size() == 200 && corpus_.queries.size() == 20, "synthetic corpus shape");
        std::ifstream in(dir_ / "corpus/qrels.tsv");
        std::size_t misleading = 0;
        for (std::string line; std::getline(in, line);) {
            misleading += line.find("\tmisleading") != std::string::npos;
        }
        require(misleading == 5 * 10, "five misleading groups");
    }

    std::string
    p(const std::string& rel) const {
        return (dir_ / rel).string();
    }

    const Corpus&
    corpus() const {
        return corpus_;
    }

    void
    cli(const std::vector<std::string>& args) {
        const auto r = tk::run_cli(args, dir_.path(), {{kEndpointEnv, ""}});
        require(r.exit_code == 0, "tokenrank " + args.front() + " exited " + std::to_string(r.exit_code) + ": " + r.err);
    }

    double
    eval(const std::string& ranked) {
        const auto r = tk::run_cli({"eval", "--ranked", p(ranked), "--qrels", p("corpus/qrels.tsv"), "--k", "50"},
                                   dir_.path(), {});
        require(r.exit_code == 0, "eval exited " + std::to_string(r.exit_code) + ": " + r.err);
        const std::string prefix = "summary,50,";
        require(r.out.rfind(prefix, 0) == 0, "eval summary line: " + r.out.substr(0, 80));
        return std::stod(r.out.substr(prefix.size(), r.out.find(',', prefix.size()) - prefix.size()));
    }

    /// build-index, search, rerank; returns {no-rerank mAP, reranked mAP}.
    std::pair<double, double>
    run(const std::string& tag, const std::vector<std::string>& build_extra) {
        std::vector<std::string> build{"build-index", "--dumps", p("corpus/db"), "--out", p(tag + ".tkix")};
        build.insert(build.end(), build_extra.begin(), build_extra.end());
        cli(build);
        cli({"search", "--index", p(tag + ".tkix"), "--queries", p("corpus/queries"), "--k", "50", "--out",
             p(tag + "_short.csv")});
        cli({"rerank", "--index", p(tag + ".tkix"), "--shortlists", p(tag + "_short.csv"), "--queries",
             p("corpus/queries"), "--scorer", "mock", "--lambda", "0.5", "--out", p(tag + "_ranked.csv")});
        return {eval(tag + "_short.csv"), eval(tag + "_ranked.csv")};
    }

private:
    tk::TempDir dir_;
    Corpus corpus_;
};

std::unique_ptr<Pipeline> g_pipeline;
double g_fp16_map = std::nan("");

Pipeline&
pipeline() {
    if (!g_pipeline) {
        g_pipeline = std::make_unique<Pipeline>();
    }
    return *g_pipeline;
}

std::string
fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void
ac7_end_to_end(std::string& note) {
    auto& pl = pipeline();
    const auto [plain, reranked] = pl.run("fp16", {"--compression", "fp16"});
    note = "no-rerank " + fmt(plain) + ", rerank " + fmt(reranked);
    require(reranked > plain, "rerank does not improve mAP@50");
    const double oracle_plain = oracle_map(pl.corpus(), 50, std::nullopt, half_rounded);
    const double oracle_rerank = oracle_map(pl.corpus(), 50, 0.5, half_rounded);
    require(std::abs(plain - oracle_plain) <= 1e-9, "no-rerank vs oracle " + fmt(oracle_plain));
    require(std::abs(reranked - oracle_rerank) <= 1e-9, "rerank vs oracle " + fmt(oracle_rerank));
    g_fp16_map = reranked;
}

void
ac8_compression(std::string& note) {
    auto& pl = pipeline();
    if (std::isnan(g_fp16_map)) {
        g_fp16_map = pl.run("fp16", {"--compression", "fp16"}).second;
    }
    const std::size_t dim = pl.corpus().db.front().grid.dim();
    pl.cli({"train-pq", "--dumps", pl.p("corpus/db"), "--d", "4", "--k", "256", "--seed", "1", "--out", pl.p("pq4.pq")});
    pl.cli({"train-pq", "--dumps", pl.p("corpus/db"), "--d", std::to_string(dim), "--k", "8", "--seed", "1", "--out",
            pl.p("pqD.pq")});
    const double pq4 = pl.run("pq4", {"--compression", "pq", "--codebooks", pl.p("pq4.pq")}).second;
    const double pqD = pl.run("pqD", {"--compression", "pq", "--codebooks", pl.p("pqD.pq")}).second;
    note = "fp16 " + fmt(g_fp16_map) + ", pq d=4 " + fmt(pq4) + ", pq d=" + std::to_string(dim) + " " + fmt(pqD);
    require(std::abs(g_fp16_map - pq4) <= 0.05, "pq d=4 gap exceeds 0.05");
    require(g_fp16_map - pqD > g_fp16_map - pq4, "single-subspace pq does not degrade more than d=4");

    const auto cb4 = load_codebooks(pl.p("pq4.pq"));
    const double oracle4 =
        oracle_map(pl.corpus(), 50, 0.5, [&](const TokenGrid& g) { return pq_rounded(g, cb4); });
    require(std::abs(pq4 - oracle4) <= 1e-9, "pq d=4 vs oracle " + fmt(oracle4));
}

// ---------------------------------------------------------------- AC9

void
ac9_index_roundtrip() {
    tk::TempDir dir("tokenrank-ac9");
    std::mt19937_64 rng(9);
    std::vector<ImageRecord> recs;
    for (int i = 0; i < 100; ++i) {
        const auto rows = static_cast<std::uint16_t>(1 + rng() % 6);
        const auto cols = static_cast<std::uint16_t>(1 + rng() % 6);
        recs.push_back(random_record(rng, "img" + std::to_string(i), rows, cols, 24));
    }
    const auto path = dir / "rt.tkix";
    build_index(recs, IndexConfig::fp16(), path, 1);
    {
        const auto index = Index::open(path);
        require(index.size() == recs.size(), "image count");
        for (const auto& r : recs) {
            const auto got = index.fetch_tokens(r.image_id);
            const auto& want = half_rounded(r.grid);
            require(got.size() == want.size() && got.dim() == want.dim(), "shape of " + r.image_id);
            require(std::equal(got.positions().begin(), got.positions().end(), want.positions().begin()),
                    "positions of " + r.image_id);
            const auto a = got.tokens();
            const auto b = want.tokens();
            require(std::memcmp(a.data(), b.data(), a.size_bytes()) == 0, "tokens of " + r.image_id);
            const auto i = static_cast<std::size_t>(&r - recs.data());
            const auto g = index.global(i);
            require(index.ids()[i] == r.image_id &&
                        std::memcmp(g.data(), r.global.vector().data(), g.size_bytes()) == 0,
                    "global of " + r.image_id);
            const auto entry = index.fetch_entry(r.image_id);
            const auto& halves = std::get<std::vector<std::uint16_t>>(entry.payload);
            for (std::size_t t = 0; t < halves.size(); ++t) {
                require(halves[t] == float_to_half(r.grid.tokens()[t]), "stored half of " + r.image_id);
            }
        }
    }

    std::ifstream in(path, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (int flip = 0; flip < 100; ++flip) {
        std::string bad = bytes;
        const std::size_t at = rng() % bad.size();
        bad[at] = static_cast<char>(bad[at] ^ static_cast<char>(1 + rng() % 255));
        const auto bad_path = dir / "flip.tkix";
        std::ofstream(bad_path, std::ios::binary | std::ios::trunc) << bad;
        require_error(
            [&] {
                const auto index = Index::open(bad_path);
                for (const auto& id : index.ids()) {
                    (void)index.fetch_tokens(id);
                }
            },
            {ErrorCode::Corrupt, ErrorCode::BadMagic, ErrorCode::UnsupportedVersion},
            "flip at byte " + std::to_string(at));
    }
}

// ---------------------------------------------------------------- AC10

double
ref_crossing(const std::vector<CurvePoint>& c, double b) {
    if (c[0].mean_similarity < b) {
        return c[0].factor;
    }
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (c[i].mean_similarity < b) {
            const double t = (c[i - 1].mean_similarity - b) / (c[i - 1].mean_similarity - c[i].mean_similarity);
            return c[i - 1].factor + t * (c[i].factor - c[i - 1].factor);
        }
    }
    return std::nan("");
}

void
ac10_robustness_harness() {
    const auto image = make_test_image(48, 36, 10);
    const auto padded = pad(image, kTransformBorder);
    require(padded.width() == 48 + 2 * kTransformBorder, "border width");
    for (const auto& [kind, f] : std::vector<std::pair<TransformKind, double>>{
             {TransformKind::Contrast, 1.0}, {TransformKind::Occlusion, 0.0}, {TransformKind::Noise, 0.0}}) {
        require(apply_transform(image, {kind, f, std::nullopt, 3}) == padded,
                std::string(to_string(kind)) + " identity");
    }
    const auto once = rotate_nearest(image, 180.0);
    require(once != image, "rotation changes the image");
    require(rotate_nearest(once, 180.0) == image, "rotation-180 involution");

    const std::vector<std::pair<std::vector<CurvePoint>, double>> hand = {
        {{{0, 0.9}, {0.25, 0.85}, {0.5, 0.7}, {0.75, 0.6}, {1, 0.5}}, 0.8},
        {{{1, 0.95}, {2, 0.9}, {3, 0.4}, {4, 0.3}}, 0.5},
        {{{0.5, 0.9}, {0.3, 0.7}, {0.1, 0.4}}, 0.6},
        {{{0, 0.3}, {1, 0.2}}, 0.5},
        {{{1, 0.9}, {5, 0.8}, {9, 0.7}}, 0.8},
    };
    for (const auto& [c, b] : hand) {
        const auto got = crossing_point(c, b);
        require(got.has_value() && std::abs(*got - ref_crossing(c, b)) <= 1e-12, "hand-built crossing");
    }
    require(std::abs(*crossing_point(hand[0].first, 0.8) - (0.25 + (0.05 / 0.15) * 0.25)) <= 1e-12,
            "worked crossing value");
    require(!crossing_point(hand[0].first, 0.4).has_value(), "no crossing above the curve");

    std::vector<double> blur(15);
    std::vector<double> clutter(28);
    for (std::size_t i = 0; i < 28; ++i) {
        clutter[i] = static_cast<double>(i + 1);
        if (i < 15) {
            blur[i] = static_cast<double>(i + 1);
        }
    }
    require(factor_grid(TransformKind::Blur, 15) == blur, "blur grid 1..15");
    require(factor_grid(TransformKind::Clutter, 28) == clutter, "clutter grid 1..28");
    require(factor_grid(TransformKind::Occlusion, 5) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0},
            "occlusion grid 0..1");
    const auto occ = factor_range(TransformKind::Occlusion);
    const auto bl = factor_range(TransformKind::Blur);
    const auto cl = factor_range(TransformKind::Clutter);
    require(occ.lo() == 0.0 && occ.hi() == 1.0, "occlusion range");
    require(bl.lo() == 1.0 && bl.hi() == 15.0, "blur range");
    require(cl.lo() == 1.0 && cl.hi() == 28.0, "clutter range");
}

// ---------------------------------------------------------------- AC11

void
ac11_remote_contract() {
    std::mt19937_64 rng(11);
    std::vector<TokenGrid> gs;
    for (int i = 0; i < 20; ++i) {
        gs.push_back(round_grid_to_half(tk::random_grid(rng, 2, 3, 8)));
    }
    const std::span<const TokenGrid> cands = std::span(gs).subspan(1);
    {
        tk::StubService stub;
        const auto one = RemoteScorer(stub.config(1)).score_batch(gs[0], cands, PromptId::Object);
        const auto eight = RemoteScorer(stub.config(8)).score_batch(gs[0], cands, PromptId::Object);
        require(one.size() == cands.size() && one == eight, "batch 1 vs 8 differ");
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const auto [l0, l1] = tk::stub_logits(gs[0], cands[i]);
            require(std::abs(one[i] - tk::ref_two_token(l1, l0)) <= 1e-12, "score vs logits");
        }
        require(stub.batch_sizes().size() == 19 + 3, "request count");
    }
    {
        tk::StubBehavior b;
        b.fail_first = 2;
        tk::StubService stub(b);
        auto cfg = stub.config();
        cfg.max_retries = 2;
        const auto s = RemoteScorer(cfg).score_batch(gs[0], cands.first(3), PromptId::Object);
        require(s.size() == 3 && stub.score_requests() == 3, "retry then succeed");
    }
    for (int variant = 0; variant < 3; ++variant) {
        tk::StubBehavior b;
        if (variant == 0) {
            b.protocol = kWireProtocol + 1;
        } else if (variant == 1) {
            b.dim = 16;
        } else {
            b.score_status = 409;
        }
        tk::StubService stub(b);
        require_error([&] { RemoteScorer(stub.config()).score_batch(gs[0], cands, PromptId::Object); },
                      {ErrorCode::ProtocolMismatch}, "protocol mismatch variant " + std::to_string(variant));
    }
}

// ---------------------------------------------------------------- runner

struct Criterion {
    const char* id;
    const char* what;
    double budget_s;  // 0 = none
    std::function<void(std::string&)> run;
};

template <typename Fn>
std::function<void(std::string&)>
plain(Fn fn) {
    return [fn](std::string&) { fn(); };
}

}  // namespace

int
main() {
    const std::vector<Criterion> criteria = {
        {"AC1", "storage laws", 1.0, plain(ac1_storage_laws)},
        {"AC2", "pq encode oracle and error monotonicity", 10.0, plain(ac2_pq_oracle)},
        {"AC3", "divprune oracle", 5.0, plain(ac3_divprune_oracle)},
        {"AC4", "2x2 window counts", 0.0, plain(ac4_window_counts)},
        {"AC5", "two-token similarity identities", 0.0, plain(ac5_two_token_math)},
        {"AC6", "map oracle and fusion endpoints", 0.0, plain(ac6_map_oracle)},
        {"AC7", "end-to-end mock pipeline", 60.0, ac7_end_to_end},
        {"AC8", "compression degradation", 0.0, ac8_compression},
        {"AC9", "index round trip and corruption", 0.0, plain(ac9_index_roundtrip)},
        {"AC10", "robustness harness", 0.0, plain(ac10_robustness_harness)},
        {"AC11", "remote client contract", 10.0, plain(ac11_remote_contract)},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        std::string note;
        std::string problem;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(note);
        } catch (const std::exception& e) {
            problem = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (problem.empty() && c.budget_s > 0.0 && secs > c.budget_s) {
            problem = "took longer than " + fmt(c.budget_s) + " s";
        }
        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.2fs", secs);
        std::cout << c.id << ' ' << (problem.empty() ? "PASS" : "FAIL") << ' ' << c.what << " (" << timing << ')';
        if (!note.empty()) {
            std::cout << " [" << note << ']';
        }
        if (!problem.empty()) {
            std::cout << ": " << problem;
            ++failed;
        }
        std::cout << std::endl;
    }
    g_pipeline.reset();
    return failed == 0 ? 0 : 1;
}
