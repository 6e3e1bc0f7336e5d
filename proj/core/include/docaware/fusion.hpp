#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docaware/corpus.hpp"
#include "docaware/ranking.hpp"

namespace docaware {

struct FusionConfig {
    double alpha = 0.0;              // weight on the document (BM25) side
    std::size_t cutoff_bm25 = 1000;  // document candidates consumed
    std::size_t cutoff_neural = 1000;
    std::size_t output_k = 1000;

    /// Throws InvalidArgument unless 0 <= alpha <= 1 and every count >= 1.
    void validate() const;
};

/// Passage <-> parent-document association.
class DocToPassageMap {
public:
    DocToPassageMap() = default;
    static DocToPassageMap from_corpus(const Corpus& corpus);

    /// Adds a document with its passages in position order. Throws
    /// ValidationError if a passage already belongs to another document.
    void add(const std::string& doc_id, const std::vector<std::string>& passage_ids);

    const std::string* parent(std::string_view passage_id) const;
    const std::vector<std::string>* passages(std::string_view doc_id) const;

    std::size_t document_count() const { return passages_of_.size(); }

private:
    std::unordered_map<std::string, std::vector<std::string>> passages_of_;
    std::unordered_map<std::string, std::string> parent_of_;
};

/// Min-max rescaling onto [0, 1] using the ranking's own extremes; order and
/// ids are kept. When every score is equal, every score becomes 1.0.
Ranking normalize(const Ranking& ranking);

/// Convex combination of a document ranking and a passage ranking.
///
/// Each side is truncated to its cutoff and normalized. Candidates are the
/// passages of every retrieved document plus every retrieved passage; a
/// passage scores alpha * doc_side(parent) + (1 - alpha) * passage_side,
/// where a side the candidate is missing from contributes 0.
///
/// Throws LookupError when a passage or document id is not in `mapping`;
/// the message carries the number of unresolved ids.
Ranking convex_fuse(const Ranking& doc_ranking, const Ranking& passage_ranking,
                    const DocToPassageMap& mapping, const FusionConfig& cfg);

/// convex_fuse restricted to passages whose document is in the truncated
/// document ranking. Normalization still uses the full truncated rankings.
Ranking hierarchical_retrieve(const Ranking& doc_ranking, const Ranking& passage_ranking,
                              const DocToPassageMap& mapping, const FusionConfig& cfg);

/// Document score = max score of its passages in `passage_ranking`.
Ranking maxp_doc_ranking(const Ranking& passage_ranking, const DocToPassageMap& mapping);

enum class FusionMode { convex, hierarchical };

FusionMode parse_fusion_mode(std::string_view name);

/// Fuses every query present in either run.
Run fuse_runs(const Run& doc_run, const Run& passage_run, const DocToPassageMap& mapping,
              const FusionConfig& cfg, FusionMode mode, unsigned threads = 1);

Run maxp_run(const Run& passage_run, const DocToPassageMap& mapping);

/// 0.0, 0.1, ..., 1.0
std::vector<double> default_alpha_grid();

struct SweepResult {
    double best_alpha = 0.0;
    std::vector<std::pair<double, double>> table;  // (alpha, mean nDCG@10) in grid order
    std::size_t num_queries = 0;
};

struct SweepOptions {
    FusionConfig base;  // alpha is overwritten per grid point
    FusionMode mode = FusionMode::convex;
    std::size_t ndcg_k = 10;
    const QuerySubset* subset = nullptr;
    unsigned threads = 1;
};

/// Evaluates the fusion at every grid alpha by mean nDCG@k over the judged
/// queries (restricted to `subset` when given) and returns the best alpha;
/// ties go to the smaller alpha. Throws InvalidArgument for an empty or
/// out-of-range grid and ValidationError when no query is evaluable.
SweepResult sweep_alpha(const Run& doc_run, const Run& passage_run, const DocToPassageMap& mapping,
                        const JudgmentSet& judgments, const std::vector<double>& grid,
                        const SweepOptions& options = {});

/// `alpha,mean_ndcg10` CSV with a header row.
std::string format_sweep_csv(const SweepResult& result);

}  // namespace docaware
