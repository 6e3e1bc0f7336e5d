#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "docaware/corpus.hpp"
#include "docaware/diagnostics.hpp"
#include "docaware/topic_rank.hpp"

namespace docaware {

// Corpus-to-corpus passage rewrites. Every transform keeps doc ids, passage
// ids, positions and counts; only passage texts change.

/// `title + " " + text` for every passage of a titled document.
Corpus prepend_title(const Corpus& corpus);

using KeyphraseMap = std::map<std::string, KeyphraseSet>;

/// TopicRank keyphrases for every document, computed in parallel.
KeyphraseMap extract_all_keyphrases(const Corpus& corpus, const TopicRankOptions& options = {},
                                    unsigned threads = 1);

/// `k1;k2;...;kn + " " + text`. Documents missing from `keyphrases` are left
/// unchanged and counted under "missing-keyphrases"; empty sets are no-ops.
Corpus prepend_keyphrases(const Corpus& corpus, const KeyphraseMap& keyphrases, Diagnostics* diag = nullptr);

/// Keyphrase cache: JSON-lines `{"doc_id": ..., "phrases": [...]}`.
std::string format_keyphrase_cache(const KeyphraseMap& keyphrases);
KeyphraseMap parse_keyphrase_cache(std::string_view jsonl, std::string_view source = "<keyphrases>");
KeyphraseMap load_keyphrase_cache(const std::filesystem::path& path);
void write_keyphrase_cache(const KeyphraseMap& keyphrases, const std::filesystem::path& path);

/// One predicted (mention, antecedent) pair from an external coreference
/// resolver. Offsets count Unicode code points in the passage text; `end`
/// is exclusive.
struct MentionRecord {
    std::string doc_id;
    int passage_position = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string antecedent_text;
    int antecedent_passage_position = 0;
    std::size_t antecedent_start = 0;

    friend bool operator==(const MentionRecord&, const MentionRecord&) = default;
};

/// JSON-lines sidecar with fields `doc_id, passage_position, start, end,
/// antecedent_text, antecedent_passage_position, antecedent_start`.
std::vector<MentionRecord> parse_mentions(std::string_view jsonl, std::string_view source = "<mentions>");
std::vector<MentionRecord> load_mentions(const std::filesystem::path& path);

struct CorefStats {
    std::size_t mentions = 0;       // distinct mention spans
    std::size_t inserted = 0;
    std::size_t same_passage = 0;   // earliest antecedent in the mention's passage
    std::size_t overlapping = 0;    // dropped because an enclosing span won
};

/// For every mention span, picks its earliest antecedent by
/// (passage position, start); when that lies in another passage, inserts
/// ` (antecedent_text)` right after the span. Nested or overlapping spans
/// keep the outer (earlier-starting, then longer) one.
///
/// Throws ValidationError naming the record index when a record refers to
/// an unknown document or passage, has an out-of-bounds span, or has an
/// antecedent that does not precede the mention.
Corpus annotate_coref(const Corpus& corpus, const std::vector<MentionRecord>& mentions,
                      CorefStats* stats = nullptr);

enum class Transform { none, title, keyphrase, coref };

Transform parse_transform(std::string_view name);
std::string_view to_string(Transform t);

}  // namespace docaware
