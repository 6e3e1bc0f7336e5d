#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "docaware/errors.hpp"
#include "docaware/inverted_index.hpp"
#include "oracles/oracles.hpp"
#include "support/fixtures.hpp"

using namespace docaware;

namespace {

using TokenDocs = std::map<std::string, std::vector<std::string>>;

const TokenDocs kHandCorpus = {
    {"d1", {"cat", "dog", "cat"}},
    {"d2", {"dog", "bird"}},
    {"d3", {"fish", "cat", "bird", "bird"}},
    {"d4", {"frog", "frog", "frog", "frog"}},
    {"d5", {"cat", "fish", "dog", "frog", "bird"}},
};

InvertedIndex index_of(const TokenDocs& docs) {
    std::vector<std::pair<std::string, TokenStream>> cands(docs.begin(), docs.end());
    return InvertedIndex::from_tokens(Granularity::passage, std::move(cands));
}

struct Bm25Case {
    TokenStream query;
    std::map<std::string, double> expected;
};

// Hand-computed with avgdl = 3.6, N = 5.
const std::vector<Bm25Case> kBm25Cases = {
    {{"cat", "bird"},
     {{"d1", 0.37957500051597687},
      {"d2", 0.30976810386936043},
      {"d3", 0.6444975340130665},
      {"d4", 0.0},
      {"d5", 0.5284279418947913}}},
    {{"frog"}, {{"d1", 0.0}, {"d2", 0.0}, {"d3", 0.0}, {"d4", 0.7088815687076112}, {"d5", 0.42915134184014697}}},
    {{"dog", "dog"},
     {{"d1", 0.5858657616659643},
      {"d2", 0.6195362077387209},
      {"d3", 0.0},
      {"d4", 0.0},
      {"d5", 0.5284279418947913}}},
    {{"zebra"}, {{"d1", 0.0}, {"d2", 0.0}, {"d3", 0.0}, {"d4", 0.0}, {"d5", 0.0}}},
};

TokenStream random_tokens(std::mt19937_64& rng, int vocab, int max_len) {
    std::uniform_int_distribution<int> len(1, max_len), word(0, vocab - 1);
    TokenStream out(static_cast<std::size_t>(len(rng)));
    for (auto& t : out) t = "w" + std::to_string(word(rng));
    return out;
}

}  // namespace

TEST(BuildIndex, PassageAverageLength) {
    const Corpus c({fixtures::make_doc("a", std::nullopt, {"alpha beta gamma", "delta epsilon zeta eta theta"})});
    const InvertedIndex idx = build_index(c, Granularity::passage);
    EXPECT_EQ(idx.num_candidates(), 2u);
    EXPECT_DOUBLE_EQ(idx.avg_length(), 4.0);
}

TEST(BuildIndex, DocumentGranularityWithTitle) {
    const Corpus c({fixtures::make_doc("a", std::string("T"), {"x y"})});
    const InvertedIndex idx = build_index(c, Granularity::document);
    ASSERT_EQ(idx.num_candidates(), 1u);
    EXPECT_EQ(idx.candidate_id(0), "a");
    EXPECT_EQ(idx.length(0), 3u);
    EXPECT_EQ(document_text(c.documents()[0], true), "T x y");
    const InvertedIndex bare = build_index(c, Granularity::document, {.include_titles = false});
    EXPECT_EQ(bare.length(0), 2u);
}

TEST(BuildIndex, DocumentFrequencyMatchesBruteForce) {
    std::mt19937_64 rng(5);
    TokenDocs docs;
    for (int i = 0; i < 50; ++i) docs["c" + std::to_string(i)] = random_tokens(rng, 40, 25);
    const InvertedIndex idx = index_of(docs);
    std::set<std::string> vocab;
    for (const auto& [_, toks] : docs) vocab.insert(toks.begin(), toks.end());
    EXPECT_EQ(idx.num_terms(), vocab.size());
    for (const auto& term : vocab) {
        std::size_t df = 0;
        for (const auto& [_, toks] : docs) df += std::find(toks.begin(), toks.end(), term) != toks.end();
        EXPECT_EQ(idx.document_frequency(term), df) << term;
        for (const Posting& p : idx.postings(term)) {
            const auto& toks = docs.at(idx.candidate_id(p.candidate));
            EXPECT_EQ(p.tf, static_cast<std::uint32_t>(std::count(toks.begin(), toks.end(), term)));
        }
    }
}

TEST(BuildIndex, RejectsEmptyAndDuplicates) {
    EXPECT_THROW(InvertedIndex::from_tokens(Granularity::passage, {}), ValidationError);
    EXPECT_THROW(InvertedIndex::from_tokens(Granularity::passage, {{"a", {"x"}}, {"a", {"y"}}}), ValidationError);
}

TEST(BuildIndex, ThreadCountDoesNotChangeIndex) {
    const Corpus c = load_corpus(fixtures::data_dir() / "fixture" / "corpus.jsonl");
    for (auto g : {Granularity::passage, Granularity::document}) {
        EXPECT_EQ(build_index(c, g, {.threads = 1}), build_index(c, g, {.threads = 4}));
    }
}

TEST(Bm25, HandComputedValues) {
    const InvertedIndex idx = index_of(kHandCorpus);
    EXPECT_DOUBLE_EQ(idx.avg_length(), 3.6);
    for (const auto& c : kBm25Cases) {
        for (const auto& [id, value] : c.expected) {
            EXPECT_NEAR(bm25_score(idx, c.query, id), value, 1e-9) << id;
            EXPECT_NEAR(oracle::bm25(kHandCorpus, c.query, id), value, 1e-9) << id;
        }
    }
}

TEST(Bm25, SingleCandidate) {
    const InvertedIndex idx = InvertedIndex::from_tokens(Granularity::passage, {{"only", {"term"}}});
    EXPECT_NEAR(bm25_score(idx, {"term"}, "only"), std::log(4.0 / 3.0) / 1.9, 1e-9);
    EXPECT_NEAR(bm25_score(idx, {"term"}, "only"), 0.15141161707988465, 1e-12);
}

TEST(Bm25, UnknownCandidateThrows) {
    const InvertedIndex idx = index_of(kHandCorpus);
    EXPECT_THROW(bm25_score(idx, {"cat"}, "nope"), LookupError);
}

TEST(Bm25, IdfFormula) {
    EXPECT_DOUBLE_EQ(bm25_idf(5, 2), std::log(1.0 + 3.5 / 2.5));
    EXPECT_GT(bm25_idf(1000, 1000), 0.0);
}

TEST(Bm25, MonotoneInTermFrequency) {
    // Same length, more occurrences of the query term: strictly higher score.
    for (int tf = 0; tf < 6; ++tf) {
        TokenDocs docs = {{"filler", {"x", "y", "z", "w", "v", "u"}}};
        TokenStream lo(6, "pad"), hi(6, "pad");
        std::fill_n(lo.begin(), tf, "q");
        std::fill_n(hi.begin(), tf + 1, "q");
        docs["lo"] = lo;
        docs["hi"] = hi;
        const InvertedIndex idx = index_of(docs);
        EXPECT_LT(bm25_score(idx, {"q"}, "lo"), bm25_score(idx, {"q"}, "hi")) << tf;
    }
}

TEST(Search, ExampleOrder) {
    const InvertedIndex idx = index_of(kHandCorpus);
    const Ranking r = search(idx, TokenStream{"cat", "bird"}, 10);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r.items[0].id, "d3");
    EXPECT_EQ(r.items[1].id, "d5");
    EXPECT_EQ(r.items[2].id, "d1");
    EXPECT_EQ(r.items[3].id, "d2");
    EXPECT_TRUE(search(idx, TokenStream{"zebra"}, 10).empty());
    EXPECT_THROW(search(idx, TokenStream{"cat"}, 0), InvalidArgument);
}

TEST(Search, MatchesBruteForceOnRandomCollections) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        TokenDocs docs;
        for (int i = 0; i < 20; ++i) docs["c" + std::to_string(i)] = random_tokens(rng, 12, 10);
        const InvertedIndex idx = index_of(docs);
        const TokenStream query = random_tokens(rng, 15, 4);
        oracle::Items all;
        for (const auto& [id, _] : docs) {
            const double s = oracle::bm25(docs, query, id);
            if (s > 0.0) all.emplace_back(id, s);
        }
        all = oracle::sorted(all);
        for (std::size_t k : {1u, 5u, 50u}) {
            const Ranking r = search(idx, query, k);
            ASSERT_EQ(r.size(), std::min(k, all.size()));
            EXPECT_TRUE(is_well_ordered(r));
            for (std::size_t i = 0; i < r.size(); ++i) {
                EXPECT_EQ(r.items[i].id, all[i].first);
                EXPECT_NEAR(r.items[i].score, all[i].second, 1e-9);
                EXPECT_EQ(r.items[i].score, bm25_score(idx, query, r.items[i].id));
            }
        }
    }
}

TEST(Search, PrefixStableAcrossK) {
    std::mt19937_64 rng(3);
    TokenDocs docs;
    for (int i = 0; i < 40; ++i) docs["c" + std::to_string(i)] = random_tokens(rng, 8, 6);
    const InvertedIndex idx = index_of(docs);
    const TokenStream query = {"w1", "w2", "w3"};
    const Ranking big = search(idx, query, 40);
    for (std::size_t k = 1; k <= 40; ++k) {
        const Ranking small = search(idx, query, k);
        EXPECT_EQ(small.items, truncate(big, k).items);
    }
}

TEST(Search, CandidateWithoutSharedTermNeverReturned) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        TokenDocs docs;
        for (int i = 0; i < 15; ++i) docs["c" + std::to_string(i)] = random_tokens(rng, 20, 5);
        const InvertedIndex idx = index_of(docs);
        const TokenStream query = random_tokens(rng, 25, 3);
        for (const auto& item : search(idx, query, 100).items) {
            const auto& toks = docs.at(item.id);
            const bool shares = std::any_of(query.begin(), query.end(), [&](const std::string& q) {
                return std::find(toks.begin(), toks.end(), q) != toks.end();
            });
            EXPECT_TRUE(shares) << item.id;
        }
    }
}

TEST(Search, QueryTextIsAnalyzed) {
    const Corpus c = load_corpus(fixtures::data_dir() / "fixture" / "corpus.jsonl");
    const InvertedIndex idx = build_index(c, Granularity::passage);
    const Ranking r = search(idx, Query{"q", "The Stone Tools", Split::test}, 3);
    ASSERT_FALSE(r.empty());
    EXPECT_EQ(r.items[0].id.rfind("stonetools#", 0), 0u);
}

TEST(IndexIo, RoundTripPreservesScores) {
    const Corpus c = load_corpus(fixtures::data_dir() / "fixture" / "corpus.jsonl");
    fixtures::TempDir tmp("index");
    for (auto g : {Granularity::passage, Granularity::document}) {
        const InvertedIndex idx = build_index(c, g);
        const auto dir = tmp / std::string(to_string(g));
        write_index(idx, dir);
        const InvertedIndex back = read_index(dir);
        EXPECT_EQ(idx, back);
        EXPECT_EQ(index_manifest(idx), index_manifest(back));
        const TokenStream q = tokenize("stone tools in kenya");
        EXPECT_EQ(search(idx, q, 10), search(back, q, 10));
    }
}

TEST(IndexIo, CorruptPostingsRejected) {
    const InvertedIndex idx = index_of(kHandCorpus);
    fixtures::TempDir tmp("index-bad");
    write_index(idx, tmp.path());
    std::ofstream(tmp / "postings.bin", std::ios::binary) << "XXXX";
    EXPECT_THROW(read_index(tmp.path()), Error);
    EXPECT_THROW(read_index(tmp / "missing"), Error);
}

TEST(IndexIo, ManifestMentionsTokenizer) {
    const std::string manifest = index_manifest(index_of(kHandCorpus));
    EXPECT_NE(manifest.find(std::string(kTokenizerVersion)), std::string::npos);
    EXPECT_NE(manifest.find("\"granularity\": \"passage\""), std::string::npos);
}
