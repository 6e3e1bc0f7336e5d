#include <gtest/gtest.h>

#include <random>

#include "docaware/errors.hpp"
#include "docaware/evaluation.hpp"
#include "docaware/fusion.hpp"
#include "oracles/oracles.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace docaware;

namespace {

Ranking ranking(std::vector<ScoredCandidate> items, std::string qid = "q") {
    Ranking r{std::move(qid), std::move(items)};
    sort_ranking(r);
    return r;
}

std::vector<std::string> ids_of(const Ranking& r) {
    std::vector<std::string> out;
    for (const auto& it : r.items) out.push_back(it.id);
    return out;
}

std::vector<std::string> ids_of(const oracle::Items& items) {
    std::vector<std::string> out;
    for (const auto& [id, _] : items) out.push_back(id);
    return out;
}

oracle::FuseInput oracle_input(const fixtures::RandomCollection& c, const Ranking& docs, const Ranking& passages) {
    return {oracle::items_of(docs), oracle::items_of(passages), c.doc_passages};
}

void expect_matches(const Ranking& got, const oracle::Items& want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(got.items[i].id, want[i].first) << "rank " << i;
        EXPECT_EQ(got.items[i].score, want[i].second) << "rank " << i;
    }
}

}  // namespace

TEST(Normalize, Examples) {
    const Ranking n = normalize(ranking({{"a", 3}, {"b", 2}, {"c", 1}}));
    EXPECT_EQ(n.items[0].score, 1.0);
    EXPECT_EQ(n.items[1].score, 0.5);
    EXPECT_EQ(n.items[2].score, 0.0);
    EXPECT_EQ(normalize(ranking({{"a", 7.3}})).items[0].score, 1.0);
    EXPECT_TRUE(normalize(Ranking{"q", {}}).empty());
}

TEST(Normalize, RandomRankingsHitBoundsAndKeepOrder) {
    std::mt19937_64 rng(1);
    std::vector<std::string> ids;
    for (int i = 0; i < 100; ++i) ids.push_back("p" + std::to_string(i));
    for (int trial = 0; trial < 200; ++trial) {
        const Ranking r = fixtures::random_ranking(rng, ids, 100);
        const Ranking n = normalize(r);
        ASSERT_EQ(ids_of(n), ids_of(r));
        if (r.empty()) continue;
        const bool degenerate = r.items.front().score == r.items.back().score;
        EXPECT_EQ(n.items.front().score, 1.0);
        EXPECT_EQ(n.items.back().score, degenerate ? 1.0 : 0.0);
        for (const auto& it : n.items) {
            EXPECT_GE(it.score, 0.0);
            EXPECT_LE(it.score, 1.0);
        }
        EXPECT_TRUE(is_well_ordered(n));
        EXPECT_EQ(normalize(n), n);
    }
}

TEST(ConvexFuse, WorkedExample) {
    DocToPassageMap map;
    map.add("d1", {"p1", "p2"});
    map.add("d2", {"p3"});
    FusionConfig cfg;
    cfg.alpha = 0.3;
    const Ranking fused = convex_fuse(ranking({{"d1", 1.0}}), ranking({{"p2", 1.0}, {"p3", 0.0}}), map, cfg);
    ASSERT_EQ(fused.size(), 3u);
    EXPECT_EQ(fused.items[0].id, "p2");
    EXPECT_NEAR(fused.items[0].score, 1.0, 1e-12);
    EXPECT_EQ(fused.items[1].id, "p1");
    EXPECT_NEAR(fused.items[1].score, 0.3, 1e-12);
    EXPECT_EQ(fused.items[2].id, "p3");
    EXPECT_EQ(fused.items[2].score, 0.0);

    oracle::FuseInput in{{{"d1", 1.0}}, {{"p2", 1.0}, {"p3", 0.0}}, {{"d1", {"p1", "p2"}}, {"d2", {"p3"}}}};
    expect_matches(fused, oracle::fuse(in, 0.3, 1000, 1000, 1000, false));
}

TEST(ConvexFuse, MatchesOracleOnRandomFixtures) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const auto c = fixtures::random_collection(rng, 12, 4);
        const auto map = c.mapping();
        const Ranking docs = fixtures::random_ranking(rng, c.doc_ids, 12);
        const Ranking passages = fixtures::random_ranking(rng, c.passage_ids, 30);
        FusionConfig cfg;
        cfg.alpha = std::uniform_int_distribution<int>(0, 10)(rng) / 10.0;
        cfg.cutoff_bm25 = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        cfg.cutoff_neural = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        cfg.output_k = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        const auto in = oracle_input(c, docs, passages);
        expect_matches(convex_fuse(docs, passages, map, cfg),
                       oracle::fuse(in, cfg.alpha, cfg.cutoff_bm25, cfg.cutoff_neural, cfg.output_k, false));
        expect_matches(hierarchical_retrieve(docs, passages, map, cfg),
                       oracle::fuse(in, cfg.alpha, cfg.cutoff_bm25, cfg.cutoff_neural, cfg.output_k, true));
    }
}

TEST(ConvexFuse, AlphaZeroKeepsNormalizedPassageOrder) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fixtures::random_collection(rng, 8, 3);
        const Ranking docs = fixtures::random_ranking(rng, c.doc_ids, 8);
        const Ranking passages = fixtures::random_ranking(rng, c.passage_ids, 20);
        FusionConfig cfg;
        const Ranking fused = convex_fuse(docs, passages, c.mapping(), cfg);
        const Ranking n = normalize(passages);
        ASSERT_GE(fused.size(), n.size());
        // Retrieved passages keep their normalized order; document-only
        // passages score 0 and can only tie with the neural minimum.
        std::vector<std::string> neural_part;
        const auto neural_ids = ids_of(n);
        const std::set<std::string> retrieved(neural_ids.begin(), neural_ids.end());
        for (const auto& it : fused.items) {
            if (retrieved.count(it.id)) neural_part.push_back(it.id);
        }
        EXPECT_EQ(neural_part, ids_of(n));
    }
}

TEST(ConvexFuse, AlphaOneProjectsDocumentScores) {
    DocToPassageMap map;
    map.add("d1", {"d1#2", "d1#1"});
    map.add("d2", {"d2#1"});
    map.add("d3", {"d3#1"});
    FusionConfig cfg;
    cfg.alpha = 1.0;
    const Ranking fused = convex_fuse(ranking({{"d1", 5}, {"d2", 1}}), ranking({{"d3#1", 9}, {"d2#1", 3}}), map, cfg);
    EXPECT_EQ(ids_of(fused), (std::vector<std::string>{"d1#1", "d1#2", "d2#1", "d3#1"}));
    EXPECT_EQ(fused.items[0].score, 1.0);
    EXPECT_EQ(fused.items[1].score, 1.0);
    EXPECT_EQ(fused.items[2].score, 0.0);
    EXPECT_EQ(fused.items[3].score, 0.0);
}

TEST(ConvexFuse, AffineInputTransformDoesNotChangeOutput) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fixtures::random_collection(rng, 8, 3);
        Ranking docs = fixtures::random_ranking(rng, c.doc_ids, 8);
        Ranking passages = fixtures::random_ranking(rng, c.passage_ids, 20);
        FusionConfig cfg;
        cfg.alpha = 0.4;
        const Ranking before = convex_fuse(docs, passages, c.mapping(), cfg);
        for (auto& it : docs.items) it.score = 4.0 * it.score + 2.0;
        for (auto& it : passages.items) it.score = 0.5 * it.score - 8.0;
        const Ranking after = convex_fuse(docs, passages, c.mapping(), cfg);
        ASSERT_EQ(ids_of(before), ids_of(after));
        for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before.items[i].score, after.items[i].score, 1e-9);
    }
}

TEST(ConvexFuse, RaisingADocumentScoreNeverLowersItsPassages) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fixtures::random_collection(rng, 6, 3);
        Ranking docs = fixtures::random_ranking(rng, c.doc_ids, 6);
        if (docs.size() < 2) continue;
        const Ranking passages = fixtures::random_ranking(rng, c.passage_ids, 15);
        FusionConfig cfg;
        cfg.alpha = 0.5;
        const auto score_map = [](const Ranking& r) {
            std::map<std::string, double> m;
            for (const auto& it : r.items) m[it.id] = it.score;
            return m;
        };
        const auto before = score_map(convex_fuse(docs, passages, c.mapping(), cfg));
        // Raise a middle document without moving the extremes.
        const std::size_t mid = docs.size() / 2;
        const double room = docs.items[0].score - docs.items[mid].score;
        docs.items[mid].score += room / 2;
        const std::string raised = docs.items[mid].id;
        sort_ranking(docs);
        const auto after = score_map(convex_fuse(docs, passages, c.mapping(), cfg));
        for (const auto& pid : c.doc_passages.at(raised)) {
            if (before.count(pid)) EXPECT_GE(after.at(pid), before.at(pid)) << pid;
        }
    }
}

TEST(ConvexFuse, UnresolvedIdsThrowWithCount) {
    DocToPassageMap map;
    map.add("d1", {"p1"});
    try {
        convex_fuse(ranking({{"d1", 1}}), ranking({{"x1", 1}, {"x2", 0.5}}), map, {});
        FAIL();
    } catch (const LookupError& e) {
        EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    }
    EXPECT_THROW(convex_fuse(ranking({{"dz", 1}}), ranking({}), map, {}), LookupError);
}

TEST(FusionConfig, Validation) {
    FusionConfig cfg;
    cfg.alpha = 1.5;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.alpha = 0.5;
    cfg.output_k = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Hierarchical, RestrictsToRetrievedDocuments) {
    DocToPassageMap map;
    map.add("d1", {"p1", "p2"});
    map.add("d2", {"p3"});
    FusionConfig cfg;
    cfg.alpha = 0.2;
    const Ranking r = hierarchical_retrieve(ranking({{"d1", 1}}), ranking({{"p3", 5}, {"p2", 1}}), map, cfg);
    // p3 was the neural top-1 but its document was not retrieved.
    EXPECT_EQ(ids_of(r), (std::vector<std::string>{"p1", "p2"}));
    EXPECT_TRUE(hierarchical_retrieve(Ranking{"q", {}}, ranking({{"p3", 5}}), map, cfg).empty());
}

TEST(Hierarchical, EqualsFilteredConvexFuse) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fixtures::random_collection(rng, 10, 4);
        const auto map = c.mapping();
        const Ranking docs = fixtures::random_ranking(rng, c.doc_ids, 10);
        const Ranking passages = fixtures::random_ranking(rng, c.passage_ids, 25);
        for (double alpha : default_alpha_grid()) {
            FusionConfig cfg;
            cfg.alpha = alpha;
            cfg.cutoff_bm25 = 5;
            const Ranking h = hierarchical_retrieve(docs, passages, map, cfg);
            std::set<std::string> kept;
            for (const auto& it : truncate(docs, cfg.cutoff_bm25).items) kept.insert(it.id);
            Ranking filtered{docs.query_id, {}};
            for (const auto& it : convex_fuse(docs, passages, map, cfg).items) {
                if (kept.count(*map.parent(it.id))) filtered.items.push_back(it);
            }
            EXPECT_EQ(h, filtered);
        }
    }
}

TEST(MaxP, Examples) {
    DocToPassageMap map;
    map.add("d1", {"a", "b"});
    map.add("d2", {"c"});
    const Ranking r = maxp_doc_ranking(ranking({{"a", 0.2}, {"b", 0.9}, {"c", 0.5}}), map);
    EXPECT_EQ(r, ranking({{"d1", 0.9}, {"d2", 0.5}}));
    EXPECT_THROW(maxp_doc_ranking(ranking({{"zz", 1}}), map), LookupError);
}

TEST(MaxP, MatchesGroupByMaxOracle) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fixtures::random_collection(rng, 10, 5);
        const Ranking passages = fixtures::random_ranking(rng, c.passage_ids, 50);
        expect_matches(maxp_doc_ranking(passages, c.mapping()), oracle::maxp(oracle::items_of(passages), c.parent));
    }
}

TEST(Sweep, PerfectNeuralRunPicksZero) {
    const auto pop = fixtures::make_population(fixtures::PopulationKind::self_contained, "a", 20, 1);
    const SweepResult r = sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, default_alpha_grid());
    EXPECT_EQ(r.best_alpha, 0.0);
    EXPECT_EQ(r.table.front().second, 1.0);
    EXPECT_EQ(r.num_queries, 20u);
}

TEST(Sweep, DocumentOnlySignalPicksOne) {
    const auto pop = fixtures::make_population(fixtures::PopulationKind::context_dependent, "b", 20, 2);
    const SweepResult r = sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, default_alpha_grid());
    EXPECT_EQ(r.best_alpha, 1.0);
    for (std::size_t i = 0; i + 1 < r.table.size(); ++i) EXPECT_LT(r.table[i].second, r.table.back().second);
}

TEST(Sweep, TableMatchesPerAlphaEvaluation) {
    const auto pop = fixtures::make_population(fixtures::PopulationKind::context_dependent, "b", 10, 3);
    const SweepResult r = sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, {0.0, 0.5, 1.0});
    for (const auto& [alpha, mean] : r.table) {
        FusionConfig cfg;
        cfg.alpha = alpha;
        const docaware::Run fused = fuse_runs(pop.doc_run, pop.passage_run, pop.mapping, cfg, FusionMode::convex);
        double sum = 0.0;
        for (const auto& [qid, grades] : pop.judgments.entries) {
            sum += oracle::ndcg(ids_of(fused.at(qid)), grades, 10);
        }
        EXPECT_NEAR(mean, sum / 10.0, 1e-12);
    }
}

TEST(Sweep, DeterministicAcrossRunsAndThreads) {
    auto pop = fixtures::make_population(fixtures::PopulationKind::self_contained, "a", 15, 4);
    std::mt19937_64 rng(5);
    fixtures::add_population(pop, fixtures::PopulationKind::context_dependent, "b", 15, rng);
    SweepOptions one;
    SweepOptions four;
    four.threads = 4;
    const SweepResult a = sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, default_alpha_grid(), one);
    const SweepResult b = sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, default_alpha_grid(), four);
    EXPECT_EQ(a.table, b.table);
    EXPECT_EQ(a.best_alpha, b.best_alpha);
    EXPECT_EQ(format_sweep_csv(a), format_sweep_csv(b));
    EXPECT_EQ(format_sweep_csv(a).substr(0, 17), "alpha,mean_ndcg10");
}

TEST(Sweep, SubsetRestrictsQueries) {
    auto pop = fixtures::make_population(fixtures::PopulationKind::self_contained, "a", 5, 6);
    std::mt19937_64 rng(6);
    fixtures::add_population(pop, fixtures::PopulationKind::context_dependent, "b", 5, rng);
    QuerySubset hard{"hard", {"b0", "b1", "b2", "b3", "b4"}};
    SweepOptions opts;
    opts.subset = &hard;
    const SweepResult r = sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, default_alpha_grid(), opts);
    EXPECT_EQ(r.num_queries, 5u);
    EXPECT_EQ(r.best_alpha, 1.0);
}

TEST(Sweep, Errors) {
    const auto pop = fixtures::make_population(fixtures::PopulationKind::self_contained, "a", 2, 1);
    EXPECT_THROW(sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, {}), InvalidArgument);
    EXPECT_THROW(sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, pop.judgments, {1.2}), InvalidArgument);
    EXPECT_THROW(sweep_alpha(pop.doc_run, pop.passage_run, pop.mapping, JudgmentSet{}, {0.5}), ValidationError);
}

TEST(FuseRuns, CoversQueriesFromEitherRun) {
    DocToPassageMap map;
    map.add("d1", {"p1"});
    docaware::Run docs{{"q1", ranking({{"d1", 1}}, "q1")}};
    docaware::Run passages{{"q2", ranking({{"p1", 1}}, "q2")}};
    const docaware::Run fused = fuse_runs(docs, passages, map, {}, FusionMode::convex);
    EXPECT_EQ(fused.size(), 2u);
    EXPECT_EQ(fused.at("q1").items[0].id, "p1");
    EXPECT_EQ(fused.at("q2").query_id, "q2");
}
