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

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "csv_io.hpp"
#include "tokenrank/bytes.hpp"
#include "tokenrank/dump.hpp"
#include "tokenrank/error.hpp"
#include "tokenrank/eval.hpp"
#include "tokenrank/index.hpp"
#include "tokenrank/parallel.hpp"
#include "tokenrank/pq.hpp"
#include "tokenrank/qrels.hpp"
#include "tokenrank/remote.hpp"
#include "tokenrank/rerank.hpp"
#include "tokenrank/robustness.hpp"
#include "tokenrank/search.hpp"
#include "tokenrank/synthetic.hpp"

namespace tokenrank::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    bool verbose = false;
    std::size_t jobs = 0;
};

struct RemoteOptions {
    std::string endpoint;
    std::size_t batch_size = 8;
    std::size_t in_flight = 4;
    std::int64_t timeout_ms = 120'000;
    std::size_t retries = 2;

    RemoteConfig
    config() const {
        RemoteConfig c;
        c.endpoint = endpoint;
        c.batch_size = batch_size;
        c.max_in_flight = in_flight;
        c.timeout = std::chrono::milliseconds(timeout_ms);
        c.max_retries = retries;
        return c;
    }
};

struct ScoringOptions {
    std::string scorer = "mock";
    std::string prompt = "object";
    double lambda = FusionConfig::kDefaultLambda;
    RemoteOptions remote;
};

void
add_remote_options(CLI::App* cmd, RemoteOptions& r) {
    if (const char* env = std::getenv(kEndpointEnv)) {
        r.endpoint = env;
    }
    cmd->add_option("--endpoint", r.endpoint, "Scoring service base URL")->envname(kEndpointEnv)->capture_default_str();
    cmd->add_option("--batch-size", r.batch_size, "Candidates per request")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--in-flight", r.in_flight, "Concurrent requests per query")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--timeout-ms", r.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--retries", r.retries, "Retries after 5xx / timeout / connection failure")->capture_default_str();
}

void
add_scoring_options(CLI::App* cmd, ScoringOptions& s) {
    cmd->add_option("--scorer", s.scorer, "Pairwise scorer")
        ->check(CLI::IsMember({"mock", "remote"}))
        ->capture_default_str();
    cmd->add_option("--prompt", s.prompt, "Prompt template")
        ->check(CLI::IsMember({"generic", "object", "landmark"}))
        ->capture_default_str();
    add_remote_options(cmd, s.remote);
}

std::unique_ptr<Scorer>
make_scorer(const ScoringOptions& s) {
    if (s.scorer == "remote") {
        return std::make_unique<RemoteScorer>(s.remote.config());
    }
    return std::make_unique<MockScorer>();
}

void
emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    write_file_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                                          text.size()));
}

std::map<std::string, ImageRecord>
load_queries(const fs::path& dir) {
    auto records = load_dump_dir(dir);
    if (records.empty()) {
        fail(ErrorCode::EmptyCorpus, "no query dumps in " + dir.string());
    }
    std::map<std::string, ImageRecord> out;
    for (auto& r : records) {
        auto id = r.image_id;
        out.emplace(std::move(id), std::move(r));
    }
    return out;
}

Index
open_index(const std::string& path, const std::string& codebooks) {
    std::shared_ptr<const PqCodebooks> cb;
    if (!codebooks.empty()) {
        cb = std::make_shared<const PqCodebooks>(load_codebooks(codebooks));
    }
    return Index::open(path, cb);
}

const ImageRecord&
query_record(const std::map<std::string, ImageRecord>& queries, const std::string& id) {
    auto it = queries.find(id);
    if (it == queries.end()) {
        fail(ErrorCode::UnknownId, "query '" + id + "' has no dump in the queries directory");
    }
    return it->second;
}

std::vector<RankedList>
rerank_all(const Index& index,
           const std::vector<Shortlist>& shortlists,
           const std::map<std::string, ImageRecord>& queries,
           const ScoringOptions& s,
           std::size_t jobs) {
    const auto scorer = make_scorer(s);
    RerankOptions opts;
    opts.fusion.lambda = s.lambda;
    opts.prompt = parse_prompt(s.prompt);
    if (s.scorer == "remote") {
        opts.batch_size = std::numeric_limits<std::size_t>::max();
    }
    std::vector<RankedList> out(shortlists.size());
    parallel_for(shortlists.size(), jobs, [&](std::size_t i) {
        const auto& q = query_record(queries, shortlists[i].query_id);
        out[i] = rerank(shortlists[i], index, q.grid, *scorer, opts);
    });
    return out;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string out;
    std::uint64_t seed = SyntheticConfig{}.seed;
    std::size_t images = 0;
    std::size_t width = 96;
    std::size_t height = 72;
};

void
cmd_synth(const SynthArgs& a, std::ostream& out) {
    SyntheticConfig cfg;
    cfg.seed = a.seed;
    const auto corpus = make_synthetic_corpus(cfg);
    const fs::path root(a.out);
    fs::create_directories(root / "db");
    fs::create_directories(root / "queries");
    for (const auto& r : corpus.database) {
        write_dump(root / "db", r);
    }
    for (const auto& r : corpus.queries) {
        write_dump(root / "queries", r);
    }
    std::ostringstream q;
    write_qrels(q, corpus.qrels);
    emit((root / "qrels.tsv").string(), q.str(), out);
    if (a.images > 0) {
        fs::create_directories(root / "images");
        for (std::size_t i = 0; i < a.images; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "img%03zu.png", i);
            write_png(root / "images" / name, make_test_image(a.width, a.height, a.seed + i));
        }
    }
    out << "database=" << corpus.database.size() << " queries=" << corpus.queries.size()
        << " images=" << a.images << '\n';
}

struct TrainArgs {
    std::string dumps;
    std::size_t d = 16;
    std::size_t k = PqCodebooks::kDefaultCentroids;
    std::uint64_t seed = 0;
    std::size_t max_vectors = 0;
    std::size_t max_iter = 100;
    std::string out;
};

void
cmd_train_pq(const TrainArgs& a, const Globals& g, std::ostream& out) {
    const auto records = load_dump_dir(a.dumps);
    if (records.empty()) {
        fail(ErrorCode::EmptyCorpus, "no dumps in " + a.dumps);
    }
    const std::size_t dim = validate_corpus(records).token_dim;
    std::vector<float> vectors;
    for (const auto& r : records) {
        vectors.insert(vectors.end(), r.grid.tokens().begin(), r.grid.tokens().end());
    }
    std::size_t n = vectors.size() / dim;
    if (a.max_vectors != 0 && a.max_vectors < n) {
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        std::mt19937_64 rng(a.seed);
        std::shuffle(rows.begin(), rows.end(), rng);
        rows.resize(a.max_vectors);
        std::sort(rows.begin(), rows.end());
        std::vector<float> sample;
        sample.reserve(a.max_vectors * dim);
        for (auto r : rows) {
            sample.insert(sample.end(), vectors.begin() + static_cast<std::ptrdiff_t>(r * dim),
                          vectors.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim));
        }
        vectors = std::move(sample);
        n = a.max_vectors;
    }
    PqTrainParams p;
    p.sub_dim = a.d;
    p.num_centroids = a.k;
    p.seed = a.seed;
    p.max_iterations = a.max_iter;
    p.jobs = g.jobs;
    const auto cb = train_codebooks(vectors, dim, p);
    save_codebooks(a.out, cb);
    out << "vectors=" << n << " dim=" << dim << " sub_dim=" << a.d << " centroids=" << a.k
        << " mean_reconstruction_error=" << format_score(mean_reconstruction_error(vectors, cb)) << '\n';
}

struct BuildArgs {
    std::string dumps;
    std::string compression = "fp16";
    std::string codebooks;
    std::string select = "none";
    std::string out;
};

void
cmd_build_index(const BuildArgs& a, const Globals& g, std::ostream& out) {
    const auto selection = parse_selection(a.select);
    IndexConfig cfg = IndexConfig::fp16(selection);
    if (a.compression == "pq") {
        if (a.codebooks.empty()) {
            fail(ErrorCode::InvalidArgument, "--compression pq needs --codebooks");
        }
        auto cb = std::make_shared<const PqCodebooks>(load_codebooks(a.codebooks));
        const auto index_dir = fs::absolute(a.out).parent_path();
        const auto rel = fs::absolute(a.codebooks).lexically_relative(index_dir);
        cfg = IndexConfig::pq(std::move(cb), rel.empty() ? fs::absolute(a.codebooks).string() : rel.string(),
                              selection);
    }
    const auto records = load_dump_dir(a.dumps);
    const auto report = build_index(records, cfg, a.out, g.jobs);
    out << "images=" << report.images << " bytes=" << report.total_bytes
        << " payload_bytes_per_image=" << format_score(report.payload_bytes_per_image)
        << " overhead_bytes_per_image=" << format_score(report.overhead_bytes_per_image) << '\n';
}

struct SearchArgs {
    std::string index;
    std::string codebooks;
    std::string queries;
    std::size_t k = kDefaultShortlist;
    std::string out;
};

void
cmd_search(const SearchArgs& a, const Globals& g, std::ostream& out) {
    const auto index = open_index(a.index, a.codebooks);
    const auto queries = load_queries(a.queries);
    std::vector<const ImageRecord*> qs;
    for (const auto& [id, r] : queries) {
        qs.push_back(&r);
    }
    std::vector<RankedList> lists(qs.size());
    parallel_for(qs.size(), g.jobs, [&](std::size_t i) {
        lists[i] = to_ranked_list(global_topk(qs[i]->image_id, qs[i]->global, index, a.k));
    });
    std::ostringstream csv;
    write_ranked_csv(csv, lists);
    emit(a.out, csv.str(), out);
}

struct RerankArgs {
    std::string index;
    std::string codebooks;
    std::string shortlists;
    std::string queries;
    ScoringOptions scoring;
    std::string out;
};

void
cmd_rerank(const RerankArgs& a, const Globals& g, std::ostream& out) {
    const auto index = open_index(a.index, a.codebooks);
    const auto queries = load_queries(a.queries);
    const auto shortlists = to_shortlists(load_ranked_csv(a.shortlists));
    const auto lists = rerank_all(index, shortlists, queries, a.scoring, g.jobs);
    std::ostringstream csv;
    write_ranked_csv(csv, lists);
    emit(a.out, csv.str(), out);
}

struct EvalArgs {
    std::string ranked;
    std::string qrels;
    std::size_t k = kDefaultShortlist;
    bool groups = false;
    std::string out;
};

void
cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto lists = load_ranked_csv(a.ranked);
    const auto qrels = load_qrels(a.qrels);
    auto report = evaluate(lists, qrels, a.k);
    if (!a.groups) {
        report.per_group.clear();
    }
    std::ostringstream csv;
    write_eval_csv(csv, report);
    emit(a.out, csv.str(), out);
}

struct RobustnessArgs {
    std::string images;
    std::string kind = "occlusion";
    std::size_t n = 11;
    std::string extractor;
    std::size_t resolution = 560;
    std::optional<double> baseline;
    std::uint64_t seed = 0;
    std::string aux;
    ScoringOptions scoring;
    std::string out;
};

void
cmd_robustness(const RobustnessArgs& a, const Globals& g, std::ostream& out) {
    std::vector<fs::path> paths;
    if (!fs::is_directory(a.images)) {
        fail(ErrorCode::IoFailure, "not a directory: " + a.images);
    }
    for (const auto& e : fs::directory_iterator(a.images)) {
        if (e.is_regular_file() && e.path().extension() == ".png") {
            paths.push_back(e.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
        fail(ErrorCode::EmptyCorpus, "no .png images in " + a.images);
    }
    std::vector<Image> images;
    for (const auto& p : paths) {
        images.push_back(read_png(p));
    }

    const auto kind = parse_transform_kind(a.kind);
    const auto scorer = make_scorer(a.scoring);
    const std::string extractor_kind = a.extractor.empty() ? a.scoring.scorer : a.extractor;
    std::unique_ptr<Extractor> extractor;
    if (extractor_kind == "remote") {
        extractor = std::make_unique<RemoteExtractor>(a.scoring.remote.config(), a.resolution);
    } else {
        extractor = std::make_unique<MockExtractor>();
    }

    CurveOptions opts;
    opts.seed = a.seed;
    opts.prompt = parse_prompt(a.scoring.prompt);
    opts.jobs = g.jobs;
    if (!a.aux.empty()) {
        opts.aux_image = read_png(a.aux);
    }
    const auto factors = factor_grid(kind, a.n);
    const auto curve = robustness_curve(*scorer, *extractor, images, kind, factors, opts);

    std::ostringstream csv;
    write_curve_csv(csv, curve, kind, a.seed, scorer->id());
    emit(a.out, csv.str(), out);
    if (a.baseline) {
        const auto x = crossing_point(curve, *a.baseline);
        out << "baseline=" << format_score(*a.baseline) << " crossing=" << (x ? format_score(*x) : "none") << '\n';
    }
}

struct BenchArgs {
    std::string index;
    std::string codebooks;
    std::string queries;
    std::vector<std::size_t> k_sweep{kShortlistSweep.begin(), kShortlistSweep.end()};
    ScoringOptions scoring;
    std::string out;
};

void
cmd_bench(const BenchArgs& a, std::ostream& out) {
    const auto index = open_index(a.index, a.codebooks);
    const auto queries = load_queries(a.queries);
    const auto scorer = make_scorer(a.scoring);
    RerankOptions opts;
    opts.fusion.lambda = a.scoring.lambda;
    opts.prompt = parse_prompt(a.scoring.prompt);
    if (a.scoring.scorer == "remote") {
        opts.batch_size = std::numeric_limits<std::size_t>::max();
    }
    std::vector<const ImageRecord*> qs;
    for (const auto& [id, r] : queries) {
        qs.push_back(&r);
    }

    std::ostringstream csv;
    csv << "k,queries,mean_s,p50_s,p95_s,min_s,max_s\n";
    for (const std::size_t k : a.k_sweep) {
        std::vector<Shortlist> shortlists;
        for (const auto* q : qs) {
            shortlists.push_back(global_topk(q->image_id, q->global, index, k));
        }
        const auto t = time_queries(qs.size(), [&](std::size_t i) {
            (void)rerank(shortlists[i], index, qs[i]->grid, *scorer, opts);
        });
        csv << k << ',' << t.samples << ',' << format_score(t.mean) << ',' << format_score(t.p50) << ','
            << format_score(t.p95) << ',' << format_score(t.min) << ',' << format_score(t.max) << '\n';
    }
    emit(a.out, csv.str(), out);
}

struct InspectArgs {
    std::string index;
    std::string codebooks;
    bool per_image = false;
};

void
cmd_inspect(const InspectArgs& a, std::ostream& out) {
    const auto index = open_index(a.index, a.codebooks);
    const auto m = index.memory_report();
    const auto& cfg = index.config();
    out << "compression=" << (cfg.compression == Compression::Pq ? "pq" : "fp16")
        << " selection=" << format_selection(cfg.selection) << '\n';
    out << "images=" << m.images << " file_bytes=" << m.file_bytes << " file_overhead=" << m.file_overhead << '\n';
    out << "image_id,global,payload,positions,metadata,total\n";
    const auto row = [&](const std::string& name, const ImageBytes& b) {
        out << name << ',' << b.global << ',' << b.payload << ',' << b.positions << ',' << b.metadata << ','
            << b.total() << '\n';
    };
    if (a.per_image) {
        for (std::size_t i = 0; i < m.per_image.size(); ++i) {
            row(index.ids()[i], m.per_image[i]);
        }
    }
    row("mean", m.mean_per_image);
    row("total", m.totals);
}

}  // namespace

int
run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"tokenrank: two-stage image retrieval with token-level re-ranking"};
    app.require_subcommand(1);
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "TOML file with option defaults; command-line flags take precedence");

    Globals g;
    app.add_flag("-v,--verbose", g.verbose, "Print the resolved configuration");
    app.add_option("-j,--jobs", g.jobs, "Worker threads (0 = all cores)")->capture_default_str();

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Write the seeded synthetic corpus (dumps, qrels, test images)");
    c_synth->add_option("--out", synth.out, "Output directory")->required();
    c_synth->add_option("--seed", synth.seed)->capture_default_str();
    c_synth->add_option("--images", synth.images, "Number of PNG test images")->capture_default_str();
    c_synth->add_option("--width", synth.width)->check(CLI::PositiveNumber)->capture_default_str();
    c_synth->add_option("--height", synth.height)->check(CLI::PositiveNumber)->capture_default_str();

    TrainArgs train;
    auto* c_train = app.add_subcommand("train-pq", "Train product-quantization codebooks on dumped tokens");
    c_train->add_option("--dumps", train.dumps, "Token dump directory")->required();
    c_train->add_option("--d", train.d, "Sub-vector dimension")->required()->check(CLI::PositiveNumber);
    c_train->add_option("--k", train.k, "Centroids per subspace")->check(CLI::Range(1, 256))->capture_default_str();
    c_train->add_option("--seed", train.seed)->capture_default_str();
    c_train->add_option("--max-vectors", train.max_vectors, "Train on a seeded sample (0 = all)")->capture_default_str();
    c_train->add_option("--max-iter", train.max_iter)->check(CLI::PositiveNumber)->capture_default_str();
    c_train->add_option("--out", train.out, "Codebook file")->required();

    BuildArgs build;
    auto* c_build = app.add_subcommand("build-index", "Build an index file from token dumps");
    c_build->add_option("--dumps", build.dumps, "Token dump directory")->required();
    c_build->add_option("--compression", build.compression)
        ->check(CLI::IsMember({"fp16", "pq"}))
        ->capture_default_str();
    c_build->add_option("--codebooks", build.codebooks, "Codebook file (pq)");
    c_build->add_option("--select", build.select, "none | prune:N | cluster:N[:SEED] | sample2x2 | pool2x2")
        ->capture_default_str();
    c_build->add_option("--out", build.out, "Index file")->required();

    SearchArgs search;
    auto* c_search = app.add_subcommand("search", "Global-descriptor top-k shortlists");
    c_search->add_option("--index", search.index)->required();
    c_search->add_option("--codebooks", search.codebooks, "Override the codebooks recorded in the index");
    c_search->add_option("--queries", search.queries, "Query dump directory")->required();
    c_search->add_option("--k", search.k)->check(CLI::PositiveNumber)->capture_default_str();
    c_search->add_option("--out", search.out, "Shortlist CSV (stdout if omitted)");

    RerankArgs rr;
    auto* c_rerank = app.add_subcommand("rerank", "Re-rank shortlists with a pairwise scorer");
    c_rerank->add_option("--index", rr.index)->required();
    c_rerank->add_option("--codebooks", rr.codebooks, "Override the codebooks recorded in the index");
    c_rerank->add_option("--shortlists", rr.shortlists, "Shortlist CSV from search")->required();
    c_rerank->add_option("--queries", rr.queries, "Query dump directory")->required();
    c_rerank->add_option("--lambda", rr.scoring.lambda, "Fusion weight of the re-rank score")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    add_scoring_options(c_rerank, rr.scoring);
    c_rerank->add_option("--out", rr.out, "Ranked CSV (stdout if omitted)");

    EvalArgs ev;
    auto* c_eval = app.add_subcommand("eval", "mAP@k of ranked lists against qrels");
    c_eval->add_option("--ranked", ev.ranked)->required();
    c_eval->add_option("--qrels", ev.qrels)->required();
    c_eval->add_option("--k", ev.k)->check(CLI::PositiveNumber)->capture_default_str();
    c_eval->add_flag("--groups", ev.groups, "Add per-group rows");
    c_eval->add_option("--out", ev.out, "Report CSV (stdout if omitted)");

    RobustnessArgs rob;
    auto* c_rob = app.add_subcommand("robustness", "Similarity of images to transformed copies of themselves");
    c_rob->add_option("--images", rob.images, "Directory of .png query images")->required();
    c_rob->add_option("--kind", rob.kind)
        ->check(CLI::IsMember({"contrast", "brightness", "rotation", "downscale", "scale_bg", "blur", "tiling",
                               "noise", "clutter", "occlusion"}))
        ->capture_default_str();
    c_rob->add_option("--n", rob.n, "Factor grid size")->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
        ->capture_default_str();
    c_rob->add_option("--extractor", rob.extractor, "mock | remote (defaults to the scorer kind)")
        ->check(CLI::IsMember({"mock", "remote"}));
    c_rob->add_option("--resolution", rob.resolution, "Extraction resolution (remote)")->capture_default_str();
    c_rob->add_option("--baseline", rob.baseline, "Negative baseline for the crossing point");
    c_rob->add_option("--seed", rob.seed)->capture_default_str();
    c_rob->add_option("--aux", rob.aux, "Background / distractor image (.png)");
    add_scoring_options(c_rob, rob.scoring);
    c_rob->add_option("--out", rob.out, "Curve CSV (stdout if omitted)");

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Per-query re-rank latency across shortlist sizes");
    c_bench->add_option("--index", bench.index)->required();
    c_bench->add_option("--codebooks", bench.codebooks, "Override the codebooks recorded in the index");
    c_bench->add_option("--queries", bench.queries, "Query dump directory")->required();
    c_bench->add_option("--k-sweep", bench.k_sweep, "Comma-separated shortlist sizes")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_bench->add_option("--lambda", bench.scoring.lambda)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    add_scoring_options(c_bench, bench.scoring);
    c_bench->add_option("--out", bench.out, "Timing CSV (stdout if omitted)");

    InspectArgs inspect;
    auto* c_inspect = app.add_subcommand("inspect", "Per-image memory accounting of an index");
    c_inspect->add_option("--index", inspect.index)->required();
    c_inspect->add_option("--codebooks", inspect.codebooks, "Override the codebooks recorded in the index");
    c_inspect->add_flag("--per-image", inspect.per_image);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::Success&) {
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (g.verbose) {
        const auto* active = app.get_subcommands().front();
        std::istringstream all(app.config_to_str(true, false));
        const std::string prefix = active->get_name() + ".";
        for (std::string line; std::getline(all, line);) {
            const auto eq = line.find('=');
            const auto dot = line.find('.');
            if (dot == std::string::npos || dot > eq || line.rfind(prefix, 0) == 0) {
                err << line << '\n';
            }
        }
    }

    try {
        if (*c_synth) {
            cmd_synth(synth, out);
        } else if (*c_train) {
            cmd_train_pq(train, g, out);
        } else if (*c_build) {
            cmd_build_index(build, g, out);
        } else if (*c_search) {
            cmd_search(search, g, out);
        } else if (*c_rerank) {
            cmd_rerank(rr, g, out);
        } else if (*c_eval) {
            cmd_eval(ev, out);
        } else if (*c_rob) {
            cmd_robustness(rob, g, out);
        } else if (*c_bench) {
            cmd_bench(bench, out);
        } else if (*c_inspect) {
            cmd_inspect(inspect, out);
        }
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return is_remote_error(e.code()) ? kExitRemote : kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace tokenrank::cli
