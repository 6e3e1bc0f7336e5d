#include "docaware_cli/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>

#include "docaware/docaware.hpp"

namespace docaware::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
    unsigned threads = 0;
    Diagnostics diag;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

// Options shared by every command that loads judgments.
struct QrelsOptions {
    std::string path;
    std::string scale = "binary";

    void add(CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--qrels", path, "TREC qrels file")->check(CLI::ExistingFile);
        if (required) opt->required();
        cmd->add_option("--scale", scale, "Judgment scale")
            ->check(CLI::IsMember({"binary", "three_scale"}))
            ->capture_default_str();
    }
    JudgmentSet load(Diagnostics& diag) const { return load_judgments(path, parse_grade_scale(scale), &diag); }
};

// Options shared by every command that rewrites passages.
struct TransformOptions {
    std::vector<std::string> names{"none"};
    std::string mentions;
    std::string keyphrase_cache;
    std::size_t num_keyphrases = 10;

    void add(CLI::App* cmd) {
        cmd->add_option("--transform", names,
                        "Passage transforms applied left to right (none, title, keyphrase, coref)")
            ->delimiter(',')
            ->capture_default_str();
        cmd->add_option("--mentions", mentions, "Mention/antecedent JSON-lines sidecar (coref)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--keyphrase-cache", keyphrase_cache,
                        "Keyphrase cache; read when present, written after extraction otherwise");
        cmd->add_option("--num-keyphrases", num_keyphrases, "Keyphrases per document")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    std::vector<Transform> parsed() const {
        std::vector<Transform> out;
        for (const auto& n : names) out.push_back(parse_transform(n));
        return out;
    }

    Corpus apply(const Corpus& corpus, Context& ctx) const {
        Corpus current = corpus;
        for (Transform t : parsed()) {
            switch (t) {
                case Transform::none: break;
                case Transform::title: current = prepend_title(current); break;
                case Transform::keyphrase: current = prepend_keyphrases(current, keyphrases(current, ctx), &ctx.diag); break;
                case Transform::coref: {
                    if (mentions.empty()) throw InvalidArgument("--transform coref requires --mentions");
                    CorefStats stats;
                    current = annotate_coref(current, load_mentions(mentions), &stats);
                    *ctx.err << fmt::format("coref: {} mention spans, {} insertions, {} same-passage, {} overlapping\n",
                                            stats.mentions, stats.inserted, stats.same_passage, stats.overlapping);
                    break;
                }
            }
        }
        return current;
    }

    KeyphraseMap keyphrases(const Corpus& corpus, Context& ctx) const {
        if (!keyphrase_cache.empty() && fs::exists(keyphrase_cache)) return load_keyphrase_cache(keyphrase_cache);
        TopicRankOptions opts;
        opts.num_phrases = num_keyphrases;
        KeyphraseMap map = extract_all_keyphrases(corpus, opts, ctx.threads);
        if (!keyphrase_cache.empty()) write_keyphrase_cache(map, keyphrase_cache);
        return map;
    }
};

struct FusionOptions {
    std::string doc_run;
    std::string passage_run;
    std::string corpus;
    FusionConfig cfg;

    void add(CLI::App* cmd) {
        cmd->add_option("--doc-run", doc_run, "Document-level run (BM25)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--passage-run", passage_run, "Passage-level run (neural)")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--corpus", corpus, "Corpus JSON-lines, for the passage/document mapping")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--cutoff-bm25", cfg.cutoff_bm25, "Document candidates consumed")->capture_default_str();
        cmd->add_option("--cutoff-neural", cfg.cutoff_neural, "Passage candidates consumed")->capture_default_str();
        cmd->add_option("--output-k", cfg.output_k, "Passages kept per query")->capture_default_str();
    }
};

void write_text(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_atomic(path, text);
}

// ---------------------------------------------------------------------------

void cmd_index(Context& ctx, const std::string& corpus_path, const std::string& granularity, bool no_titles,
               const std::string& out_dir) {
    const Corpus corpus = load_corpus(corpus_path);
    IndexOptions opts;
    opts.include_titles = !no_titles;
    opts.threads = ctx.threads;
    const InvertedIndex index = build_index(corpus, parse_granularity(granularity), opts);
    write_index(index, out_dir);
    *ctx.out << fmt::format("indexed {} {} candidates, {} terms -> {}\n", index.num_candidates(),
                            to_string(index.granularity()), index.num_terms(), out_dir);
}

void cmd_search(Context& ctx, const std::string& index_dir, const std::string& queries_path, std::size_t k,
                const std::string& tag, const std::string& out_path) {
    const InvertedIndex index = read_index(index_dir);
    const auto queries = load_queries(queries_path);
    std::vector<Ranking> results(queries.size());
    parallel_for(queries.size(), ctx.threads, [&](std::size_t i) { results[i] = search(index, queries[i], k); });
    Run run;
    std::size_t empty = 0;
    for (auto& r : results) {
        if (r.empty()) {
            ++empty;
            ctx.diag.warn("query-without-hits", r.query_id);
        }
        run.emplace(r.query_id, std::move(r));
    }
    write_run(run, out_path, tag);
    *ctx.out << fmt::format("searched {} queries ({} without hits) -> {}\n", queries.size(), empty, out_path);
}

void cmd_fuse(Context& ctx, FusionOptions& fo, FusionMode mode, const std::string& tag, const std::string& out_path) {
    fo.cfg.validate();
    const Corpus corpus = load_corpus(fo.corpus);
    const auto mapping = DocToPassageMap::from_corpus(corpus);
    const Run docs = load_run(fo.doc_run, &ctx.diag);
    const Run passages = load_run(fo.passage_run, &ctx.diag);
    const Run fused = fuse_runs(docs, passages, mapping, fo.cfg, mode, ctx.threads);
    write_run(fused, out_path, tag);
    *ctx.out << fmt::format("fused {} queries at alpha {} -> {}\n", fused.size(), format_exact(fo.cfg.alpha), out_path);
}

void cmd_contextualize(Context& ctx, const std::string& corpus_path, const TransformOptions& to,
                       const std::string& out_path) {
    const Corpus corpus = load_corpus(corpus_path);
    const Corpus transformed = to.apply(corpus, ctx);
    if (fs::path(out_path).has_parent_path()) fs::create_directories(fs::path(out_path).parent_path());
    write_corpus(transformed, out_path);
    *ctx.out << fmt::format("wrote {} documents -> {}\n", transformed.document_count(), out_path);
}

void cmd_evaluate(Context& ctx, const std::string& run_path, const QrelsOptions& qo,
                  const std::vector<std::string>& metric_names, const std::string& gain, const std::string& subset_path,
                  const std::string& corpus_path, const std::string& validation, bool maxp,
                  const std::string& out_dir) {
    const JudgmentSet judgments = map_grades(qo.load(ctx.diag));
    Run run = load_run(run_path, &ctx.diag);

    std::optional<Corpus> corpus;
    if (!corpus_path.empty()) corpus = load_corpus(corpus_path);
    if (maxp) {
        if (!corpus) throw InvalidArgument("--maxp requires --corpus");
        run = maxp_run(run, DocToPassageMap::from_corpus(*corpus));
    } else if (corpus) {
        validate_judgments(judgments, *corpus, validation == "strict" ? Validation::strict : Validation::lenient,
                           &ctx.diag);
    }

    bool shared = false;
    for (const auto& [qid, _] : run) shared = shared || judgments.find(qid);
    if (!shared) {
        for (const auto& [qid, _] : run) ctx.diag.warn("unjudged-run-query", qid);
        throw ValidationError("run and qrels share no query ids");
    }

    std::vector<MetricSpec> metrics;
    for (const auto& name : metric_names) metrics.push_back(parse_metric(name));
    std::optional<QuerySubset> subset;
    if (!subset_path.empty()) subset = load_subset(subset_path);
    EvaluateOptions opts;
    opts.gain = parse_gain_mode(gain);
    opts.subset = subset ? &*subset : nullptr;

    const auto reports = evaluate_run(run, judgments, metrics, opts, &ctx.diag);
    const std::string summary = format_summary_csv(reports);
    if (!out_dir.empty()) {
        write_text(fs::path(out_dir) / "summary.csv", summary);
        write_text(fs::path(out_dir) / "per_query.csv", format_per_query_csv(reports));
    }
    *ctx.out << summary;
}

void cmd_sweep(Context& ctx, FusionOptions& fo, const QrelsOptions& qo, const std::string& mode,
               std::vector<double> grid, const std::string& subset_path, const std::string& out_path) {
    const Corpus corpus = load_corpus(fo.corpus);
    const auto mapping = DocToPassageMap::from_corpus(corpus);
    const Run docs = load_run(fo.doc_run, &ctx.diag);
    const Run passages = load_run(fo.passage_run, &ctx.diag);
    const JudgmentSet judgments = map_grades(qo.load(ctx.diag));
    std::optional<QuerySubset> subset;
    if (!subset_path.empty()) subset = load_subset(subset_path);
    if (grid.empty()) grid = default_alpha_grid();

    SweepOptions opts;
    opts.base = fo.cfg;
    opts.mode = parse_fusion_mode(mode);
    opts.subset = subset ? &*subset : nullptr;
    opts.threads = ctx.threads;
    const SweepResult result = sweep_alpha(docs, passages, mapping, judgments, grid, opts);
    const std::string csv = format_sweep_csv(result);
    if (!out_path.empty()) write_text(out_path, csv);
    *ctx.out << csv << fmt::format("best_alpha,{:.2f}\n", result.best_alpha);
}

void cmd_jaccard(Context& ctx, const std::string& queries_path, const std::string& corpus_path,
                 const QrelsOptions& qo, const TransformOptions& to, const std::string& tokens,
                 const std::string& out_path) {
    const auto queries = load_queries(queries_path);
    const Corpus corpus = load_corpus(corpus_path);
    const JudgmentSet judgments = qo.load(ctx.diag);
    const Corpus transformed = to.apply(corpus, ctx);
    const JaccardReport r = jaccard_analysis(queries, corpus, judgments, &transformed, parse_jaccard_tokens(tokens));
    if (r.skipped_empty) ctx.diag.warn("empty-jaccard-pair", fmt::format("{} pairs skipped", r.skipped_empty));
    if (r.missing_passages) {
        ctx.diag.warn("unknown-judged-passage", fmt::format("{} judged passages not in corpus", r.missing_passages));
    }
    std::string transform_label;
    for (const auto& n : to.names) transform_label += (transform_label.empty() ? "" : "+") + n;
    const std::string csv =
        fmt::format("transform,tokens,pairs,raw,transformed,delta\n{},{},{},{:.1f},{:.1f},{:.1f}\n", transform_label,
                    tokens, r.pairs, r.raw_mean, r.transformed_mean, r.delta);
    if (!out_path.empty()) write_text(out_path, csv);
    *ctx.out << csv;
}

void cmd_depth(Context& ctx, const std::string& corpus_path, const QrelsOptions& qo, const std::string& out_path) {
    const Corpus corpus = load_corpus(corpus_path);
    const JudgmentSet judgments = qo.load(ctx.diag);
    const DepthSummary s = depth_stats(corpus, judgments);
    if (s.missing) ctx.diag.warn("unknown-judged-passage", fmt::format("{} judged passages not in corpus", s.missing));
    if (s.no_judgments) {
        ctx.diag.warn("no-relevant-judgments", "no judged passage has grade > 0");
        *ctx.out << "no relevant judgments\n";
        return;
    }
    *ctx.out << fmt::format("relevant_passages,{}\nmean_depth,{:.2f}\nstddev_depth,{:.2f}\nmissing,{}\n", s.count,
                            s.mean, s.stddev, s.missing);
    if (!out_path.empty()) {
        std::string csv = "position,count\n";
        for (const auto& [pos, n] : s.histogram) csv += fmt::format("{},{}\n", pos, n);
        write_text(out_path, csv);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx;
    ctx.out = &out;
    ctx.err = &err;

    CLI::App app{"Document-aware passage retrieval toolkit"};
    app.name("docaware");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "docaware 0.1.0");
    app.set_config("--config", "", "key = value config file; [<subcommand>] sections scope keys");
    app.add_option("--threads", ctx.threads, "Worker threads (0 = all cores)")->capture_default_str();

    // index
    std::string idx_corpus, idx_granularity = "passage", idx_out;
    bool idx_no_titles = false;
    auto* index = app.add_subcommand("index", "Build a BM25 index");
    index->add_option("--corpus", idx_corpus, "Corpus JSON-lines")->required()->check(CLI::ExistingFile);
    index->add_option("--granularity", idx_granularity, "passage or document")
        ->check(CLI::IsMember({"passage", "document"}))
        ->capture_default_str();
    index->add_flag("--no-titles", idx_no_titles, "Document granularity: leave titles out");
    index->add_option("--out", idx_out, "Index directory")->required();
    index->callback([&] { cmd_index(ctx, idx_corpus, idx_granularity, idx_no_titles, idx_out); });

    // search
    std::string s_index, s_queries, s_tag = "bm25", s_out;
    std::size_t s_k = 1000;
    auto* srch = app.add_subcommand("search", "BM25 top-k retrieval to a TREC run");
    srch->add_option("--index", s_index, "Index directory")->required()->check(CLI::ExistingDirectory);
    srch->add_option("--queries", s_queries, "Queries TSV")->required()->check(CLI::ExistingFile);
    srch->add_option("-k,--k", s_k, "Results per query")->check(CLI::PositiveNumber)->capture_default_str();
    srch->add_option("--tag", s_tag, "Run tag")->capture_default_str();
    srch->add_option("--out", s_out, "Output run file")->required();
    srch->callback([&] { cmd_search(ctx, s_index, s_queries, s_k, s_tag, s_out); });

    // fuse / hier
    FusionOptions f_opts, h_opts;
    std::string f_tag = "fuse", h_tag = "hier", f_out, h_out;
    auto* fuse = app.add_subcommand("fuse", "Convex combination of a document run and a passage run");
    f_opts.add(fuse);
    fuse->add_option("--alpha", f_opts.cfg.alpha, "Weight on the document run")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    fuse->add_option("--tag", f_tag, "Run tag")->capture_default_str();
    fuse->add_option("--out", f_out, "Output run file")->required();
    fuse->callback([&] { cmd_fuse(ctx, f_opts, FusionMode::convex, f_tag, f_out); });

    auto* hier = app.add_subcommand("hier", "Hierarchical retrieval: passages of retrieved documents only");
    h_opts.add(hier);
    hier->add_option("--alpha", h_opts.cfg.alpha, "Weight on the document run")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    hier->add_option("--tag", h_tag, "Run tag")->capture_default_str();
    hier->add_option("--out", h_out, "Output run file")->required();
    hier->callback([&] { cmd_fuse(ctx, h_opts, FusionMode::hierarchical, h_tag, h_out); });

    // contextualize
    std::string c_corpus, c_out;
    TransformOptions c_transform;
    auto* ctxz = app.add_subcommand("contextualize", "Rewrite passages with document context");
    ctxz->add_option("--corpus", c_corpus, "Corpus JSON-lines")->required()->check(CLI::ExistingFile);
    c_transform.add(ctxz);
    ctxz->add_option("--out", c_out, "Output corpus JSON-lines")->required();
    ctxz->callback([&] { cmd_contextualize(ctx, c_corpus, c_transform, c_out); });

    // evaluate
    std::string e_run, e_gain = "linear", e_subset, e_corpus, e_validation = "strict", e_out;
    std::vector<std::string> e_metrics{"ndcg@10", "recall@100"};
    bool e_maxp = false;
    QrelsOptions e_qrels;
    auto* eval = app.add_subcommand("evaluate", "nDCG / recall of a run against qrels");
    eval->add_option("--run", e_run, "TREC run")->required()->check(CLI::ExistingFile);
    e_qrels.add(eval);
    eval->add_option("--metrics", e_metrics, "Metrics such as ndcg@10,recall@100")
        ->delimiter(',')
        ->capture_default_str();
    eval->add_option("--gain", e_gain, "linear or exponential")
        ->check(CLI::IsMember({"linear", "exponential"}))
        ->capture_default_str();
    eval->add_option("--subset", e_subset, "Query id list restricting the evaluation")->check(CLI::ExistingFile);
    eval->add_option("--corpus", e_corpus, "Corpus for judgment validation and --maxp")->check(CLI::ExistingFile);
    eval->add_option("--validation", e_validation, "strict or lenient judgment validation")
        ->check(CLI::IsMember({"strict", "lenient"}))
        ->capture_default_str();
    eval->add_flag("--maxp", e_maxp, "Score documents by their best passage before evaluating");
    eval->add_option("--out-dir", e_out, "Directory for summary.csv and per_query.csv");
    eval->callback([&] {
        cmd_evaluate(ctx, e_run, e_qrels, e_metrics, e_gain, e_subset, e_corpus, e_validation, e_maxp, e_out);
    });

    // sweep
    FusionOptions w_opts;
    QrelsOptions w_qrels;
    std::string w_mode = "convex", w_subset, w_out;
    std::vector<double> w_grid;
    auto* sweep = app.add_subcommand("sweep", "Tune alpha by mean nDCG@10 over a grid");
    w_opts.add(sweep);
    w_qrels.add(sweep);
    sweep->add_option("--mode", w_mode, "convex or hierarchical")
        ->check(CLI::IsMember({"convex", "hierarchical"}))
        ->capture_default_str();
    sweep->add_option("--grid", w_grid, "Alpha values (default 0.0,0.1,...,1.0)")->delimiter(',');
    sweep->add_option("--subset", w_subset, "Query id list restricting the sweep")->check(CLI::ExistingFile);
    sweep->add_option("--out", w_out, "Output CSV");
    sweep->callback([&] { cmd_sweep(ctx, w_opts, w_qrels, w_mode, w_grid, w_subset, w_out); });

    // analyze-jaccard
    std::string j_queries, j_corpus, j_tokens = "analyzed", j_out;
    QrelsOptions j_qrels;
    TransformOptions j_transform;
    j_transform.names = {"title"};
    auto* jac = app.add_subcommand("analyze-jaccard", "Query/gold-passage Jaccard before and after a transform");
    jac->add_option("--queries", j_queries, "Queries TSV")->required()->check(CLI::ExistingFile);
    jac->add_option("--corpus", j_corpus, "Corpus JSON-lines")->required()->check(CLI::ExistingFile);
    j_qrels.add(jac);
    j_transform.add(jac);
    jac->add_option("--tokens", j_tokens, "analyzed or whitespace")
        ->check(CLI::IsMember({"analyzed", "whitespace"}))
        ->capture_default_str();
    jac->add_option("--out", j_out, "Output CSV");
    jac->callback([&] { cmd_jaccard(ctx, j_queries, j_corpus, j_qrels, j_transform, j_tokens, j_out); });

    // depth-stats
    std::string d_corpus, d_out;
    QrelsOptions d_qrels;
    auto* depth = app.add_subcommand("depth-stats", "Positions of relevant passages within their documents");
    depth->add_option("--corpus", d_corpus, "Corpus JSON-lines")->required()->check(CLI::ExistingFile);
    d_qrels.add(depth);
    depth->add_option("--out", d_out, "Histogram CSV (position,count)");
    depth->callback([&] { cmd_depth(ctx, d_corpus, d_qrels, d_out); });

    int code = 0;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        code = app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = 1;
    }
    ctx.diag.summarize(err);
    return code;
}

}  // namespace docaware::cli
