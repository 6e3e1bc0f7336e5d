#include "docaware/inverted_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "docaware/errors.hpp"
#include "docaware/parallel.hpp"

namespace docaware {

std::string_view to_string(Granularity g) {
    return g == Granularity::passage ? "passage" : "document";
}

Granularity parse_granularity(std::string_view name) {
    if (name == "passage") return Granularity::passage;
    if (name == "document") return Granularity::document;
    throw InvalidArgument("unknown granularity '" + std::string(name) + "'");
}

InvertedIndex InvertedIndex::from_tokens(Granularity granularity,
                                         std::vector<std::pair<std::string, TokenStream>> candidates,
                                         bool include_titles) {
    if (candidates.empty()) throw ValidationError("cannot build an index over zero candidates");
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    InvertedIndex index;
    index.granularity_ = granularity;
    index.include_titles_ = include_titles;
    index.ids_.reserve(candidates.size());
    index.lengths_.reserve(candidates.size());

    std::unordered_map<std::string, std::uint32_t> tf;
    for (std::uint32_t number = 0; number < candidates.size(); ++number) {
        auto& [id, tokens] = candidates[number];
        if (number > 0 && id == index.ids_.back()) {
            throw ValidationError("duplicate candidate id '" + id + "'");
        }
        tf.clear();
        for (const auto& token : tokens) ++tf[token];
        for (auto& [term, count] : tf) index.postings_[term].push_back({number, count});
        index.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        index.ids_.push_back(std::move(id));
    }
    index.finalize();
    return index;
}

void InvertedIndex::finalize() {
    number_of_.clear();
    number_of_.reserve(ids_.size());
    for (std::uint32_t i = 0; i < ids_.size(); ++i) number_of_.emplace(ids_[i], i);
    const double total = std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
    avg_length_ = ids_.empty() ? 0.0 : total / static_cast<double>(ids_.size());
}

std::uint32_t InvertedIndex::candidate_number(std::string_view id) const {
    auto it = number_of_.find(std::string(id));
    if (it == number_of_.end()) throw LookupError("unknown candidate '" + std::string(id) + "'");
    return it->second;
}

bool InvertedIndex::contains(std::string_view id) const {
    return number_of_.find(std::string(id)) != number_of_.end();
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
    auto it = postings_.find(std::string(term));
    if (it == postings_.end()) return {};
    return it->second;
}

std::vector<std::string_view> InvertedIndex::sorted_terms() const {
    std::vector<std::string_view> terms;
    terms.reserve(postings_.size());
    for (const auto& [term, _] : postings_) terms.push_back(term);
    std::sort(terms.begin(), terms.end());
    return terms;
}

bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
    return a.granularity_ == b.granularity_ && a.include_titles_ == b.include_titles_ &&
           a.avg_length_ == b.avg_length_ && a.ids_ == b.ids_ && a.lengths_ == b.lengths_ &&
           a.postings_ == b.postings_;
}

std::string document_text(const Document& doc, bool include_titles) {
    std::string text;
    if (include_titles && doc.title) text = *doc.title;
    for (const auto& passage : doc.passages) {
        if (!text.empty()) text += ' ';
        text += passage.text;
    }
    return text;
}

InvertedIndex build_index(const Corpus& corpus, Granularity granularity, const IndexOptions& options) {
    std::vector<std::pair<std::string, const std::string*>> sources;
    std::vector<std::string> doc_texts;
    if (granularity == Granularity::passage) {
        sources.reserve(corpus.passage_count());
        for (const auto& doc : corpus.documents()) {
            for (const auto& passage : doc.passages) sources.emplace_back(passage.passage_id, &passage.text);
        }
    } else {
        doc_texts.reserve(corpus.document_count());
        for (const auto& doc : corpus.documents()) doc_texts.push_back(document_text(doc, options.include_titles));
        for (std::size_t i = 0; i < doc_texts.size(); ++i) {
            sources.emplace_back(corpus.documents()[i].doc_id, &doc_texts[i]);
        }
    }

    std::vector<std::pair<std::string, TokenStream>> candidates(sources.size());
    parallel_for(sources.size(), options.threads, [&](std::size_t i) {
        candidates[i] = {sources[i].first, tokenize(*sources[i].second)};
    });
    return InvertedIndex::from_tokens(granularity, std::move(candidates),
                                      granularity == Granularity::document ? options.include_titles : true);
}

double bm25_idf(std::size_t num_candidates, std::size_t df) {
    const double n = static_cast<double>(num_candidates);
    const double d = static_cast<double>(df);
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

namespace {

double term_weight(double idf, double tf, double dl, double avgdl, const Bm25Params& params) {
    const double norm = avgdl > 0.0 ? dl / avgdl : 0.0;
    return idf * tf / (tf + params.k1 * (1.0 - params.b + params.b * norm));
}

}  // namespace

double bm25_score(const InvertedIndex& index, const TokenStream& query_tokens,
                  std::string_view candidate_id, const Bm25Params& params) {
    const std::uint32_t number = index.candidate_number(candidate_id);
    const double dl = index.length(number);
    double score = 0.0;
    for (const auto& term : query_tokens) {
        const auto postings = index.postings(term);
        auto it = std::lower_bound(postings.begin(), postings.end(), number,
                                   [](const Posting& p, std::uint32_t n) { return p.candidate < n; });
        if (it == postings.end() || it->candidate != number) continue;
        score += term_weight(bm25_idf(index.num_candidates(), postings.size()), it->tf, dl,
                             index.avg_length(), params);
    }
    return score;
}

Ranking search(const InvertedIndex& index, const TokenStream& query_tokens, std::size_t k,
               const Bm25Params& params) {
    if (k < 1) throw InvalidArgument("search requires k >= 1");

    // Accumulate in query-token order for every candidate so scores are
    // bit-identical to bm25_score.
    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& term : query_tokens) {
        const auto postings = index.postings(term);
        if (postings.empty()) continue;
        const double idf = bm25_idf(index.num_candidates(), postings.size());
        for (const auto& p : postings) {
            acc[p.candidate] += term_weight(idf, p.tf, index.length(p.candidate), index.avg_length(), params);
        }
    }

    Ranking ranking;
    ranking.items.reserve(acc.size());
    for (const auto& [number, score] : acc) {
        if (score > 0.0) ranking.items.push_back({index.candidate_id(number), score});
    }
    const auto cut = std::min(k, ranking.items.size());
    std::partial_sort(ranking.items.begin(), ranking.items.begin() + static_cast<std::ptrdiff_t>(cut),
                      ranking.items.end(), ranks_before);
    ranking.items.resize(cut);
    return ranking;
}

Ranking search(const InvertedIndex& index, const Query& query, std::size_t k, const Bm25Params& params) {
    Ranking ranking = search(index, tokenize(query.text), k, params);
    ranking.query_id = query.query_id;
    return ranking;
}

}  // namespace docaware
