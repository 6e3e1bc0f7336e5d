#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace docaware {

/// Identifies the analyzer chain; persisted in index manifests.
inline constexpr std::string_view kTokenizerVersion = "docaware-analyzer-1";

/// The 33-term Lucene English stopword set.
inline constexpr std::array<std::string_view, 33> kStopwords = {
    "a",    "an",    "and",  "are",   "as",    "at",   "be",   "but",  "by",
    "for",  "if",    "in",   "into",  "is",    "it",   "no",   "not",  "of",
    "on",   "or",    "such", "that",  "the",   "their", "then", "there", "these",
    "they", "this",  "to",   "was",   "will",  "with"};

bool is_stopword(std::string_view lowercase_token);

using TokenStream = std::vector<std::string>;

/// A lowercased word together with its extent in the source text.
struct WordSpan {
    std::string word;
    std::size_t begin = 0;  // byte offsets into the UTF-8 input
    std::size_t end = 0;
};

/// Lowercases and splits UTF-8 text on non-alphanumeric code points.
/// No stopword removal or stemming.
std::vector<WordSpan> split_words(std::string_view text);

/// Full analyzer: split_words, drop stopwords, Porter-stem ASCII words.
/// Deterministic; empty input gives an empty stream.
TokenStream tokenize(std::string_view text);

/// Splits on ASCII whitespace only, leaving tokens untouched.
TokenStream whitespace_tokenize(std::string_view text);

}  // namespace docaware
