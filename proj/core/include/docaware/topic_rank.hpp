#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docaware/corpus.hpp"

namespace docaware {

struct TopicRankOptions {
    std::size_t num_phrases = 10;
    /// Candidates (and clusters, by average linkage) merge while their stem
    /// sets overlap by at least this Jaccard fraction.
    double min_stem_overlap = 0.25;
    double damping = 0.85;
    double tolerance = 1e-6;  // L1 change between iterations
    int max_iterations = 100;
    /// Candidate filters: at most this many words, each at least
    /// `min_word_chars` long, the phrase at least `min_phrase_chars`.
    std::size_t max_words = 5;
    std::size_t min_word_chars = 2;
    std::size_t min_phrase_chars = 3;
};

/// Coarse word classes from the shipped rule-based tagger. Only `content`
/// words (nouns and adjectives) may form keyphrase candidates.
enum class WordClass { content, function, verb, adverb, number };

/// Tags a lowercased word by closed-class lexicons and suffix rules.
WordClass classify_word(std::string_view lowercase_word);

struct KeyphraseCandidate {
    std::string phrase;            // lowercased words joined by single spaces
    std::set<std::string> stems;   // Porter stems of the words
    std::vector<std::size_t> offsets;  // word offsets of each occurrence, ascending
};

/// Longest runs of content words within each text segment. Runs never cross
/// punctuation or a segment boundary; offsets count words across segments.
/// Candidates are returned in order of first occurrence.
std::vector<KeyphraseCandidate> extract_candidates(const std::vector<std::string_view>& segments,
                                                   const TopicRankOptions& options = {});

/// 1 - |a ∩ b| / |a ∪ b|.
double stem_distance(const std::set<std::string>& a, const std::set<std::string>& b);

/// Average-linkage agglomerative clustering over stem-set Jaccard distance.
/// Returns clusters of candidate indices, each sorted ascending, ordered by
/// their smallest member.
std::vector<std::vector<std::size_t>> cluster_candidates(const std::vector<KeyphraseCandidate>& candidates,
                                                         double min_overlap);

struct TopicGraph {
    std::vector<std::vector<std::size_t>> topics;  // candidate indices
    std::vector<std::vector<double>> weights;      // symmetric, zero diagonal
    std::vector<double> scores;
    int iterations = 0;
};

/// Complete graph over topics; the edge weight between two topics sums
/// 1 / |offset_i - offset_j| over all occurrence pairs of their candidates.
TopicGraph build_topic_graph(const std::vector<KeyphraseCandidate>& candidates,
                             std::vector<std::vector<std::size_t>> topics);

/// Weighted PageRank over the topic graph; scores sum to 1.
void rank_topics(TopicGraph& graph, const TopicRankOptions& options = {});

struct KeyphraseSet {
    std::string doc_id;
    std::vector<std::string> phrases;  // best first

    friend bool operator==(const KeyphraseSet&, const KeyphraseSet&) = default;
};

/// TopicRank over the document's passages (the title is not used). For each
/// of the top topics, the candidate occurring first in the document is
/// emitted. A document without candidates yields an empty set.
KeyphraseSet extract_keyphrases(const Document& document, const TopicRankOptions& options = {});

/// Same as above on free text (one segment).
std::vector<std::string> extract_keyphrases(std::string_view text, const TopicRankOptions& options = {});

}  // namespace docaware
