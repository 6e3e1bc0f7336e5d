#include "docaware/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "docaware/errors.hpp"

namespace docaware {

JudgmentSet map_grades(const JudgmentSet& judgments) {
    const int top = max_grade(judgments.scale);
    for (const auto& [qid, grades] : judgments.entries) {
        for (const auto& [pid, grade] : grades) {
            if (grade < 0 || grade > top) {
                throw ValidationError(fmt::format("grade {} for ({}, {}) outside the {} scale", grade, qid, pid,
                                                  judgments.scale == GradeScale::binary ? "binary" : "three_scale"));
            }
        }
    }
    return judgments;
}

GainMode parse_gain_mode(std::string_view name) {
    if (name == "linear") return GainMode::linear;
    if (name == "exponential" || name == "exp") return GainMode::exponential;
    throw InvalidArgument("unknown gain mode '" + std::string(name) + "'");
}

namespace {

double gain_of(int grade, GainMode mode) {
    if (grade <= 0) return 0.0;
    return mode == GainMode::linear ? grade : std::exp2(grade) - 1.0;
}

const Grades& grades_for(const JudgmentSet& judgments, std::string_view qid) {
    static const Grades none;
    const auto* grades = judgments.find(qid);
    return grades ? *grades : none;
}

}  // namespace

std::optional<double> ndcg_at_k(const Ranking& ranking, const Grades& grades, std::size_t k, GainMode gain) {
    if (k < 1) throw InvalidArgument("nDCG requires k >= 1");
    std::vector<int> ideal;
    for (const auto& [_, grade] : grades) {
        if (grade > 0) ideal.push_back(grade);
    }
    if (ideal.empty()) return std::nullopt;
    std::sort(ideal.begin(), ideal.end(), std::greater<>());

    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
        idcg += gain_of(ideal[i], gain) / std::log2(static_cast<double>(i) + 2.0);
    }
    double dcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranking.items.size()); ++i) {
        auto it = grades.find(ranking.items[i].id);
        if (it == grades.end()) continue;
        dcg += gain_of(it->second, gain) / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / idcg;
}

std::optional<double> ndcg_at_k(const Ranking& ranking, const JudgmentSet& judgments, std::size_t k,
                                GainMode gain) {
    return ndcg_at_k(ranking, grades_for(judgments, ranking.query_id), k, gain);
}

std::optional<double> recall_at_k(const Ranking& ranking, const Grades& grades, std::size_t k) {
    if (k < 1) throw InvalidArgument("recall requires k >= 1");
    const auto relevant = static_cast<std::size_t>(
        std::count_if(grades.begin(), grades.end(), [](const auto& kv) { return kv.second > 0; }));
    if (relevant == 0) return std::nullopt;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(k, ranking.items.size()); ++i) {
        auto it = grades.find(ranking.items[i].id);
        if (it != grades.end() && it->second > 0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(relevant);
}

std::optional<double> recall_at_k(const Ranking& ranking, const JudgmentSet& judgments, std::size_t k) {
    return recall_at_k(ranking, grades_for(judgments, ranking.query_id), k);
}

std::string MetricSpec::name() const {
    return fmt::format("{}@{}", metric == Metric::ndcg ? "ndcg" : "recall", k);
}

MetricSpec parse_metric(std::string_view text) {
    const auto at = text.find('@');
    if (at == std::string_view::npos) throw InvalidArgument("metric must look like ndcg@10, got '" + std::string(text) + "'");
    MetricSpec spec;
    const auto name = text.substr(0, at);
    if (name == "ndcg") {
        spec.metric = Metric::ndcg;
    } else if (name == "recall") {
        spec.metric = Metric::recall;
    } else {
        throw InvalidArgument("unknown metric '" + std::string(name) + "'");
    }
    const auto digits = text.substr(at + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), spec.k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || spec.k < 1) {
        throw InvalidArgument("bad cutoff in metric '" + std::string(text) + "'");
    }
    return spec;
}

std::vector<MetricReport> evaluate_run(const Run& run, const JudgmentSet& judgments,
                                       const std::vector<MetricSpec>& metrics, const EvaluateOptions& options,
                                       Diagnostics* diag) {
    if (diag) {
        for (const auto& [qid, _] : run) {
            if (!judgments.find(qid)) diag->warn("unjudged-run-query", qid);
        }
    }

    std::vector<std::string> queries;
    for (const auto& [qid, grades] : judgments.entries) {
        if (options.subset && !options.subset->query_ids.contains(qid)) continue;
        if (judgments.relevant_count(qid) == 0) continue;
        queries.push_back(qid);
    }
    if (queries.empty()) throw ValidationError("no judged query with a relevant passage to evaluate");

    const Ranking empty;
    std::vector<MetricReport> reports;
    for (const auto& spec : metrics) {
        MetricReport report;
        report.spec = spec;
        double sum = 0.0;
        for (const auto& qid : queries) {
            auto it = run.find(qid);
            const Ranking& ranking = it == run.end() ? empty : it->second;
            const Grades& grades = *judgments.find(qid);
            const auto value = spec.metric == Metric::ndcg ? ndcg_at_k(ranking, grades, spec.k, options.gain)
                                                           : recall_at_k(ranking, grades, spec.k);
            report.per_query.emplace(qid, *value);
            sum += *value;
        }
        report.num_queries = queries.size();
        report.mean = sum / static_cast<double>(queries.size());
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string format_summary_csv(const std::vector<MetricReport>& reports) {
    std::string out = "metric,mean,num_queries\n";
    for (const auto& r : reports) out += fmt::format("{},{:.1f},{}\n", r.spec.name(), r.mean * 100.0, r.num_queries);
    return out;
}

std::string format_per_query_csv(const std::vector<MetricReport>& reports) {
    std::string out = "query_id";
    for (const auto& r : reports) out += "," + r.spec.name();
    out += '\n';
    if (reports.empty()) return out;
    for (const auto& [qid, _] : reports.front().per_query) {
        out += qid;
        for (const auto& r : reports) out += fmt::format(",{:.1f}", r.per_query.at(qid) * 100.0);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jaccard

std::optional<double> jaccard(const TokenStream& a, const TokenStream& b) {
    const std::set<std::string_view> sa(a.begin(), a.end());
    const std::set<std::string_view> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return std::nullopt;
    std::size_t common = 0;
    for (auto t : sa) common += sb.count(t);
    return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

JaccardTokens parse_jaccard_tokens(std::string_view name) {
    if (name == "analyzed") return JaccardTokens::analyzed;
    if (name == "whitespace") return JaccardTokens::whitespace;
    throw InvalidArgument("unknown Jaccard tokenization '" + std::string(name) + "'");
}

JaccardReport jaccard_analysis(const std::vector<Query>& queries, const Corpus& corpus,
                               const JudgmentSet& judgments, const Corpus* transformed, JaccardTokens mode) {
    auto tokens = [mode](std::string_view text) {
        return mode == JaccardTokens::analyzed ? tokenize(text) : whitespace_tokenize(text);
    };

    JaccardReport report;
    double raw_sum = 0.0;
    double transformed_sum = 0.0;
    for (const auto& query : queries) {
        const Grades* grades = judgments.find(query.query_id);
        if (!grades) continue;
        const TokenStream query_tokens = tokens(query.text);
        for (const auto& [pid, grade] : *grades) {
            if (grade <= 0) continue;
            const Passage* raw = corpus.find_passage(pid);
            const Passage* alt = transformed ? transformed->find_passage(pid) : raw;
            if (!raw || !alt) {
                ++report.missing_passages;
                continue;
            }
            const auto before = jaccard(query_tokens, tokens(raw->text));
            const auto after = jaccard(query_tokens, tokens(alt->text));
            if (!before || !after) {
                ++report.skipped_empty;
                continue;
            }
            raw_sum += *before;
            transformed_sum += *after;
            ++report.pairs;
        }
    }
    if (report.pairs > 0) {
        report.raw_mean = 100.0 * raw_sum / static_cast<double>(report.pairs);
        report.transformed_mean = 100.0 * transformed_sum / static_cast<double>(report.pairs);
        report.delta = report.transformed_mean - report.raw_mean;
    }
    return report;
}

}  // namespace docaware
