#include <benchmark/benchmark.h>

#include <random>

#include "docaware/docaware.hpp"

using namespace docaware;

namespace {

// Synthetic passages over a Zipf-ish vocabulary, 8 passages per document.
Corpus synthetic_corpus(int docs, int words_per_passage, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> vocab;
    for (int i = 0; i < 5000; ++i) vocab.push_back("term" + std::to_string(i) + "x");
    std::vector<double> weights;
    for (int i = 0; i < 5000; ++i) weights.push_back(1.0 / (i + 1));
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    std::vector<Document> out;
    for (int d = 0; d < docs; ++d) {
        Document doc{"d" + std::to_string(d), "title " + std::to_string(d), {}};
        for (int p = 1; p <= 8; ++p) {
            std::string text;
            for (int w = 0; w < words_per_passage; ++w) text += vocab[static_cast<std::size_t>(pick(rng))] + ' ';
            doc.passages.push_back({doc.doc_id + "#" + std::to_string(p), text, doc.doc_id, p});
        }
        out.push_back(std::move(doc));
    }
    return Corpus(std::move(out));
}

const Corpus& bench_corpus() {
    static const Corpus c = synthetic_corpus(1000, 60, 1);
    return c;
}

void BM_BuildIndex(benchmark::State& state) {
    const Corpus& c = bench_corpus();
    IndexOptions opts;
    opts.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_index(c, Granularity::passage, opts));
}
BENCHMARK(BM_BuildIndex)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
    static const InvertedIndex index = build_index(bench_corpus(), Granularity::passage);
    const TokenStream query = tokenize("term1x term17x term230x term4000x");
    for (auto _ : state) benchmark::DoNotOptimize(search(index, query, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Search)->Arg(10)->Arg(1000);

void BM_ConvexFuse(benchmark::State& state) {
    const Corpus& c = bench_corpus();
    static const DocToPassageMap map = DocToPassageMap::from_corpus(c);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> score(0.0, 50.0);
    Ranking docs{"q", {}}, passages{"q", {}};
    for (const auto& d : c.documents()) {
        docs.items.push_back({d.doc_id, score(rng)});
        for (const auto& p : d.passages) passages.items.push_back({p.passage_id, score(rng)});
    }
    sort_ranking(docs);
    sort_ranking(passages);
    FusionConfig cfg;
    cfg.alpha = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(convex_fuse(docs, passages, map, cfg));
}
BENCHMARK(BM_ConvexFuse);

void BM_TopicRank(benchmark::State& state) {
    const Corpus c = load_corpus(DOCAWARE_BENCH_CORPUS);
    for (auto _ : state) {
        for (const auto& doc : c.documents()) benchmark::DoNotOptimize(extract_keyphrases(doc));
    }
}
BENCHMARK(BM_TopicRank);

}  // namespace

BENCHMARK_MAIN();
