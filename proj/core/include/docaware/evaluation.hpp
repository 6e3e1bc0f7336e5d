#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docaware/corpus.hpp"
#include "docaware/diagnostics.hpp"
#include "docaware/ranking.hpp"
#include "docaware/tokenizer.hpp"

namespace docaware {

/// Validates grade bounds against the set's scale; grades are already the
/// integer gains (binary 0/1, three-scale 0/1/2), so conforming sets come
/// back unchanged. Throws ValidationError on an out-of-scale grade.
JudgmentSet map_grades(const JudgmentSet& judgments);

enum class GainMode { linear, exponential };

GainMode parse_gain_mode(std::string_view name);

using Grades = std::map<std::string, int>;

/// DCG@k / IDCG@k with discount log2(rank + 1). The ideal ordering sorts the
/// judged grades descending. Returns nullopt when no judged passage has
/// grade > 0, since such queries are left out of means.
std::optional<double> ndcg_at_k(const Ranking& ranking, const Grades& grades, std::size_t k = 10,
                                GainMode gain = GainMode::linear);
std::optional<double> ndcg_at_k(const Ranking& ranking, const JudgmentSet& judgments, std::size_t k = 10,
                                GainMode gain = GainMode::linear);

/// |relevant in top-k| / |relevant|; nullopt when nothing is relevant.
std::optional<double> recall_at_k(const Ranking& ranking, const Grades& grades, std::size_t k = 100);
std::optional<double> recall_at_k(const Ranking& ranking, const JudgmentSet& judgments, std::size_t k = 100);

enum class Metric { ndcg, recall };

struct MetricSpec {
    Metric metric = Metric::ndcg;
    std::size_t k = 10;

    std::string name() const;  // "ndcg@10"
    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Parses "ndcg@10" / "recall@100".
MetricSpec parse_metric(std::string_view text);

struct MetricReport {
    MetricSpec spec;
    std::map<std::string, double> per_query;  // values in [0, 1]
    double mean = 0.0;
    std::size_t num_queries = 0;
};

struct EvaluateOptions {
    GainMode gain = GainMode::linear;
    const QuerySubset* subset = nullptr;
};

/// Scores every judged query that has at least one relevant passage (and is
/// in `subset`, when given). A judged query missing from the run scores 0.
/// Run queries without judgments are counted under "unjudged-run-query".
/// Throws ValidationError when no query remains.
std::vector<MetricReport> evaluate_run(const Run& run, const JudgmentSet& judgments,
                                       const std::vector<MetricSpec>& metrics,
                                       const EvaluateOptions& options = {}, Diagnostics* diag = nullptr);

/// `metric,mean,num_queries` with means x100 at one decimal.
std::string format_summary_csv(const std::vector<MetricReport>& reports);
/// `query_id,<metric>...` with values x100 at one decimal.
std::string format_per_query_csv(const std::vector<MetricReport>& reports);

/// |a ∩ b| / |a ∪ b| over token sets; nullopt when both are empty.
std::optional<double> jaccard(const TokenStream& a, const TokenStream& b);

enum class JaccardTokens { analyzed, whitespace };

JaccardTokens parse_jaccard_tokens(std::string_view name);

struct JaccardReport {
    double raw_mean = 0.0;          // x100
    double transformed_mean = 0.0;  // x100, equals raw_mean without a transform
    double delta = 0.0;             // transformed - raw
    std::size_t pairs = 0;
    std::size_t skipped_empty = 0;
    std::size_t missing_passages = 0;
};

/// Mean Jaccard similarity between each query and its relevant passages,
/// before and after a passage transform (`transformed` must share the
/// corpus shape of `corpus`).
JaccardReport jaccard_analysis(const std::vector<Query>& queries, const Corpus& corpus,
                               const JudgmentSet& judgments, const Corpus* transformed = nullptr,
                               JaccardTokens mode = JaccardTokens::analyzed);

}  // namespace docaware
