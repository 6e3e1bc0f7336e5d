#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docaware/corpus.hpp"
#include "docaware/ranking.hpp"
#include "docaware/tokenizer.hpp"

namespace docaware {

enum class Granularity { passage, document };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view name);

/// Lucene-style BM25 constants.
struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;
};

struct Posting {
    std::uint32_t candidate = 0;  // dense candidate number, see InvertedIndex::candidate_id
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct IndexOptions {
    /// Document granularity only: index `title + " " + passages`.
    bool include_titles = true;
    unsigned threads = 1;
};

/// Term -> postings over passages or whole documents.
///
/// Candidates are numbered densely in ascending id order, so postings sorted
/// by number are also sorted by candidate id. Immutable once built.
class InvertedIndex {
public:
    InvertedIndex() = default;

    /// Assembles an index from already-tokenized candidates.
    /// Throws ValidationError on zero candidates or duplicate ids.
    static InvertedIndex from_tokens(Granularity granularity,
                                     std::vector<std::pair<std::string, TokenStream>> candidates,
                                     bool include_titles = true);

    Granularity granularity() const { return granularity_; }
    bool include_titles() const { return include_titles_; }
    std::size_t num_candidates() const { return ids_.size(); }
    double avg_length() const { return avg_length_; }
    std::size_t num_terms() const { return postings_.size(); }

    const std::string& candidate_id(std::uint32_t number) const { return ids_[number]; }
    /// Dense number of a candidate; throws LookupError when unknown.
    std::uint32_t candidate_number(std::string_view id) const;
    bool contains(std::string_view id) const;
    std::uint32_t length(std::uint32_t number) const { return lengths_[number]; }

    std::span<const Posting> postings(std::string_view term) const;
    std::size_t document_frequency(std::string_view term) const { return postings(term).size(); }

    /// Terms in lexicographic order (for serialization).
    std::vector<std::string_view> sorted_terms() const;

    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b);

private:
    friend InvertedIndex read_index(const std::filesystem::path&);

    void finalize();

    Granularity granularity_ = Granularity::passage;
    bool include_titles_ = true;
    double avg_length_ = 0.0;
    std::vector<std::string> ids_;
    std::vector<std::uint32_t> lengths_;
    std::unordered_map<std::string, std::uint32_t> number_of_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
};

/// Tokenizes every passage (or every document) of `corpus` and indexes it.
InvertedIndex build_index(const Corpus& corpus, Granularity granularity, const IndexOptions& options = {});

/// The text that represents a document at document granularity.
std::string document_text(const Document& doc, bool include_titles);

/// IDF(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_idf(std::size_t num_candidates, std::size_t df);

/// Sum over query tokens (repeats count again) of
/// IDF * tf / (tf + k1 * (1 - b + b * dl / avgdl)).
/// Throws LookupError for an unknown candidate.
double bm25_score(const InvertedIndex& index, const TokenStream& query_tokens,
                  std::string_view candidate_id, const Bm25Params& params = {});

/// Exhaustive top-k over every candidate matching at least one query token.
/// Throws InvalidArgument when k < 1.
Ranking search(const InvertedIndex& index, const TokenStream& query_tokens, std::size_t k,
               const Bm25Params& params = {});
Ranking search(const InvertedIndex& index, const Query& query, std::size_t k,
               const Bm25Params& params = {});

/// Persists to `dir/manifest.json` plus `dir/postings.bin`.
void write_index(const InvertedIndex& index, const std::filesystem::path& dir);
InvertedIndex read_index(const std::filesystem::path& dir);

/// Deterministic manifest text (granularity, N, avg_length, tokenizer version).
std::string index_manifest(const InvertedIndex& index);

}  // namespace docaware
