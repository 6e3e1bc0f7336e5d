#include "docaware/fusion.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "docaware/errors.hpp"
#include "docaware/evaluation.hpp"
#include "docaware/parallel.hpp"

namespace docaware {

void FusionConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument(fmt::format("alpha must lie in [0, 1], got {}", alpha));
    }
    if (cutoff_bm25 < 1 || cutoff_neural < 1 || output_k < 1) {
        throw InvalidArgument("fusion cutoffs and output_k must be >= 1");
    }
}

// ---------------------------------------------------------------------------
// DocToPassageMap

DocToPassageMap DocToPassageMap::from_corpus(const Corpus& corpus) {
    DocToPassageMap map;
    for (const auto& doc : corpus.documents()) {
        std::vector<std::string> ids;
        ids.reserve(doc.passages.size());
        for (const auto& p : doc.passages) ids.push_back(p.passage_id);
        map.add(doc.doc_id, ids);
    }
    return map;
}

void DocToPassageMap::add(const std::string& doc_id, const std::vector<std::string>& passage_ids) {
    auto& list = passages_of_[doc_id];
    for (const auto& pid : passage_ids) {
        auto [it, fresh] = parent_of_.emplace(pid, doc_id);
        if (!fresh) {
            if (it->second == doc_id) continue;
            throw ValidationError("passage '" + pid + "' maps to both '" + it->second + "' and '" + doc_id + "'");
        }
        list.push_back(pid);
    }
}

const std::string* DocToPassageMap::parent(std::string_view passage_id) const {
    auto it = parent_of_.find(std::string(passage_id));
    return it == parent_of_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* DocToPassageMap::passages(std::string_view doc_id) const {
    auto it = passages_of_.find(std::string(doc_id));
    return it == passages_of_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Normalization and fusion

Ranking normalize(const Ranking& ranking) {
    Ranking out = ranking;
    if (out.items.empty()) return out;
    auto [lo, hi] = std::minmax_element(out.items.begin(), out.items.end(),
                                        [](const auto& a, const auto& b) { return a.score < b.score; });
    const double min = lo->score;
    const double max = hi->score;
    if (max == min) {
        for (auto& item : out.items) item.score = 1.0;
        return out;
    }
    const double range = max - min;
    for (auto& item : out.items) item.score = (item.score - min) / range;
    return out;
}

namespace {

Ranking prepared(const Ranking& ranking, std::size_t cutoff) {
    Ranking sorted = ranking;
    if (!is_well_ordered(sorted)) sort_ranking(sorted);
    return normalize(truncate(sorted, cutoff));
}

[[noreturn]] void throw_unresolved(std::string_view what, const std::vector<std::string>& ids) {
    std::string examples;
    for (std::size_t i = 0; i < std::min<std::size_t>(ids.size(), 3); ++i) {
        examples += (i ? ", '" : "'") + ids[i] + "'";
    }
    throw LookupError(fmt::format("{} unresolved {} id(s), e.g. {}", ids.size(), what, examples));
}

Ranking fuse(const Ranking& doc_ranking, const Ranking& passage_ranking, const DocToPassageMap& mapping,
             const FusionConfig& cfg, bool restrict_to_retrieved_docs) {
    cfg.validate();
    const Ranking docs = prepared(doc_ranking, cfg.cutoff_bm25);
    const Ranking passages = prepared(passage_ranking, cfg.cutoff_neural);

    std::unordered_map<std::string_view, double> doc_side;
    std::vector<std::string> unresolved_docs;
    for (const auto& item : docs.items) {
        if (!mapping.passages(item.id)) unresolved_docs.push_back(item.id);
        doc_side.emplace(item.id, item.score);
    }
    if (!unresolved_docs.empty()) throw_unresolved("document", unresolved_docs);

    std::unordered_map<std::string_view, double> passage_side;
    std::vector<std::string> unresolved_passages;
    for (const auto& item : passages.items) {
        if (!mapping.parent(item.id)) unresolved_passages.push_back(item.id);
        passage_side.emplace(item.id, item.score);
    }
    if (!unresolved_passages.empty()) throw_unresolved("passage", unresolved_passages);

    auto fused_score = [&](std::string_view pid, std::string_view parent) {
        double score = 0.0;
        if (auto it = doc_side.find(parent); it != doc_side.end()) score += cfg.alpha * it->second;
        if (auto it = passage_side.find(pid); it != passage_side.end()) score += (1.0 - cfg.alpha) * it->second;
        return score;
    };

    Ranking out;
    out.query_id = !passage_ranking.query_id.empty() ? passage_ranking.query_id : doc_ranking.query_id;
    std::unordered_set<std::string_view> added;
    for (const auto& doc : docs.items) {
        for (const auto& pid : *mapping.passages(doc.id)) {
            if (added.insert(pid).second) out.items.push_back({pid, fused_score(pid, doc.id)});
        }
    }
    for (const auto& item : passages.items) {
        const std::string& parent = *mapping.parent(item.id);
        if (restrict_to_retrieved_docs && !doc_side.contains(parent)) continue;
        if (added.insert(item.id).second) out.items.push_back({item.id, fused_score(item.id, parent)});
    }

    const auto cut = std::min(cfg.output_k, out.items.size());
    std::partial_sort(out.items.begin(), out.items.begin() + static_cast<std::ptrdiff_t>(cut), out.items.end(),
                      ranks_before);
    out.items.resize(cut);
    return out;
}

}  // namespace

Ranking convex_fuse(const Ranking& doc_ranking, const Ranking& passage_ranking, const DocToPassageMap& mapping,
                    const FusionConfig& cfg) {
    return fuse(doc_ranking, passage_ranking, mapping, cfg, false);
}

Ranking hierarchical_retrieve(const Ranking& doc_ranking, const Ranking& passage_ranking,
                              const DocToPassageMap& mapping, const FusionConfig& cfg) {
    return fuse(doc_ranking, passage_ranking, mapping, cfg, true);
}

Ranking maxp_doc_ranking(const Ranking& passage_ranking, const DocToPassageMap& mapping) {
    std::unordered_map<std::string, double> best;
    std::vector<std::string> unresolved;
    for (const auto& item : passage_ranking.items) {
        const std::string* parent = mapping.parent(item.id);
        if (!parent) {
            unresolved.push_back(item.id);
            continue;
        }
        auto [it, fresh] = best.emplace(*parent, item.score);
        if (!fresh) it->second = std::max(it->second, item.score);
    }
    if (!unresolved.empty()) throw_unresolved("passage", unresolved);

    Ranking out;
    out.query_id = passage_ranking.query_id;
    out.items.reserve(best.size());
    for (auto& [doc_id, score] : best) out.items.push_back({doc_id, score});
    sort_ranking(out);
    return out;
}

FusionMode parse_fusion_mode(std::string_view name) {
    if (name == "convex") return FusionMode::convex;
    if (name == "hierarchical" || name == "hier") return FusionMode::hierarchical;
    throw InvalidArgument("unknown fusion mode '" + std::string(name) + "'");
}

Run fuse_runs(const Run& doc_run, const Run& passage_run, const DocToPassageMap& mapping,
              const FusionConfig& cfg, FusionMode mode, unsigned threads) {
    cfg.validate();
    std::vector<std::string> query_ids;
    for (const auto& [qid, _] : doc_run) query_ids.push_back(qid);
    for (const auto& [qid, _] : passage_run) {
        if (!doc_run.contains(qid)) query_ids.push_back(qid);
    }
    std::sort(query_ids.begin(), query_ids.end());

    std::vector<Ranking> fused(query_ids.size());
    const Ranking empty;
    parallel_for(query_ids.size(), threads, [&](std::size_t i) {
        const auto& qid = query_ids[i];
        auto d = doc_run.find(qid);
        auto p = passage_run.find(qid);
        const Ranking& docs = d == doc_run.end() ? empty : d->second;
        const Ranking& passages = p == passage_run.end() ? empty : p->second;
        fused[i] = mode == FusionMode::convex ? convex_fuse(docs, passages, mapping, cfg)
                                              : hierarchical_retrieve(docs, passages, mapping, cfg);
        fused[i].query_id = qid;
    });

    Run out;
    for (std::size_t i = 0; i < query_ids.size(); ++i) {
        if (!fused[i].empty()) out.emplace(query_ids[i], std::move(fused[i]));
    }
    return out;
}

Run maxp_run(const Run& passage_run, const DocToPassageMap& mapping) {
    Run out;
    for (const auto& [qid, ranking] : passage_run) out.emplace(qid, maxp_doc_ranking(ranking, mapping));
    return out;
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

SweepResult sweep_alpha(const Run& doc_run, const Run& passage_run, const DocToPassageMap& mapping,
                        const JudgmentSet& judgments, const std::vector<double>& grid,
                        const SweepOptions& options) {
    if (grid.empty()) throw InvalidArgument("alpha grid is empty");
    for (double a : grid) {
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument(fmt::format("grid alpha {} outside [0, 1]", a));
    }

    std::vector<std::string> queries;
    for (const auto& [qid, grades] : judgments.entries) {
        if (options.subset && !options.subset->query_ids.contains(qid)) continue;
        if (judgments.relevant_count(qid) > 0) queries.push_back(qid);
    }
    if (queries.empty()) throw ValidationError("sweep has no judged query with a relevant passage");

    const Ranking empty;
    const std::size_t cells = grid.size() * queries.size();
    std::vector<double> ndcg(cells, 0.0);
    parallel_for(cells, options.threads, [&](std::size_t cell) {
        const std::size_t g = cell / queries.size();
        const auto& qid = queries[cell % queries.size()];
        FusionConfig cfg = options.base;
        cfg.alpha = grid[g];
        auto d = doc_run.find(qid);
        auto p = passage_run.find(qid);
        const Ranking& docs = d == doc_run.end() ? empty : d->second;
        const Ranking& passages = p == passage_run.end() ? empty : p->second;
        const Ranking fused = options.mode == FusionMode::convex ? convex_fuse(docs, passages, mapping, cfg)
                                                                 : hierarchical_retrieve(docs, passages, mapping, cfg);
        ndcg[cell] = ndcg_at_k(fused, *judgments.find(qid), options.ndcg_k).value_or(0.0);
    });

    SweepResult result;
    result.num_queries = queries.size();
    bool have_best = false;
    double best_mean = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double sum = 0.0;
        for (std::size_t q = 0; q < queries.size(); ++q) sum += ndcg[g * queries.size() + q];
        const double mean = sum / static_cast<double>(queries.size());
        result.table.emplace_back(grid[g], mean);
        if (!have_best || mean > best_mean || (mean == best_mean && grid[g] < result.best_alpha)) {
            have_best = true;
            best_mean = mean;
            result.best_alpha = grid[g];
        }
    }
    return result;
}

std::string format_sweep_csv(const SweepResult& result) {
    std::string out = "alpha,mean_ndcg10\n";
    for (const auto& [alpha, mean] : result.table) out += fmt::format("{:.2f},{:.6f}\n", alpha, mean);
    return out;
}

}  // namespace docaware
