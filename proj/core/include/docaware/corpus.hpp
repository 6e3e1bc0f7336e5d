#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docaware/diagnostics.hpp"

namespace docaware {

struct Passage {
    std::string passage_id;
    std::string text;
    std::string doc_id;
    int position = 0;  // 1-based within the parent document

    friend bool operator==(const Passage&, const Passage&) = default;
};

struct Document {
    std::string doc_id;
    std::optional<std::string> title;
    std::vector<Passage> passages;  // ordered by position

    friend bool operator==(const Document&, const Document&) = default;
};

enum class Validation { strict, lenient };

/// An immutable, validated collection of documents.
///
/// Construction checks every passage/document invariant: unique ids,
/// contiguous 1..n positions, non-blank passage text, non-empty documents.
/// Blank titles are normalized to absent.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Document> documents);

    const std::vector<Document>& documents() const { return documents_; }
    std::size_t document_count() const { return documents_.size(); }
    std::size_t passage_count() const { return passage_count_; }

    const Document* find_document(std::string_view doc_id) const;
    const Passage* find_passage(std::string_view passage_id) const;

    friend bool operator==(const Corpus& a, const Corpus& b) { return a.documents_ == b.documents_; }

private:
    std::vector<Document> documents_;
    std::size_t passage_count_ = 0;
    std::unordered_map<std::string, std::size_t> doc_index_;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> passage_index_;
};

/// Corpus JSON-lines: one document per line with `doc_id`, `title`
/// (string or null) and `passages: [{text, position?, passage_id?}]`.
/// Missing passage ids become `<doc_id>#<position>`.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl, std::string_view source = "<corpus>");

std::string serialize_corpus(const Corpus& corpus);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

enum class Split { train, dev, test };

struct Query {
    std::string query_id;
    std::string text;
    Split split = Split::test;

    friend bool operator==(const Query&, const Query&) = default;
};

/// TSV `query_id<TAB>text`; file order is preserved.
std::vector<Query> load_queries(const std::filesystem::path& path, Split split = Split::test);
std::vector<Query> parse_queries(std::string_view tsv, Split split = Split::test,
                                 std::string_view source = "<queries>");

enum class GradeScale { binary, three_scale };

int max_grade(GradeScale scale);
GradeScale parse_grade_scale(std::string_view name);

/// Graded relevance labels: query id -> passage id -> grade.
struct JudgmentSet {
    GradeScale scale = GradeScale::binary;
    std::map<std::string, std::map<std::string, int>> entries;

    const std::map<std::string, int>* find(std::string_view query_id) const;
    /// Number of entries with grade > 0 for the query (0 when unjudged).
    std::size_t relevant_count(std::string_view query_id) const;
};

/// TREC qrels: `query_id iter passage_id grade`, whitespace separated.
/// Duplicate (query, passage) pairs keep the last grade and are counted in
/// `diag` under "duplicate-judgment".
JudgmentSet load_judgments(const std::filesystem::path& path, GradeScale scale,
                           Diagnostics* diag = nullptr);
JudgmentSet parse_judgments(std::string_view qrels, GradeScale scale, Diagnostics* diag = nullptr,
                            std::string_view source = "<qrels>");

/// Checks that judged passages exist in `corpus`. Strict mode throws on the
/// first unknown id; lenient mode counts them under "unknown-judged-passage"
/// and returns the number flagged.
std::size_t validate_judgments(const JudgmentSet& judgments, const Corpus& corpus,
                               Validation mode, Diagnostics* diag = nullptr);

struct QuerySubset {
    std::string name;
    std::set<std::string> query_ids;
};

/// One query id per line; blank lines are ignored. The name is the file stem.
QuerySubset load_subset(const std::filesystem::path& path);
QuerySubset parse_subset(std::string_view text, std::string name);

struct DepthSummary {
    bool no_judgments = true;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population
    std::map<int, std::size_t> histogram;
    std::size_t missing = 0;
};

/// Positions of relevant (grade > 0) judged passages within their documents.
DepthSummary depth_stats(const Corpus& corpus, const JudgmentSet& judgments);

}  // namespace docaware
