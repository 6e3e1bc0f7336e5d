#include "docaware/topic_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "docaware/porter_stemmer.hpp"
#include "docaware/tokenizer.hpp"

namespace docaware {

namespace {

// Determiners, pronouns, prepositions, conjunctions, auxiliaries, modals,
// wh-words and closed-class adverbs.
const std::unordered_set<std::string_view>& function_words() {
    static const std::unordered_set<std::string_view> words = {
        "a", "about", "above", "across", "after", "again", "against", "all", "almost", "along", "also",
        "although", "always", "am", "among", "an", "and", "another", "any", "anyone", "anything", "are",
        "around", "as", "at", "be", "because", "been", "before", "behind", "being", "below", "beneath",
        "beside", "besides", "between", "beyond", "both", "but", "by", "can", "cannot", "could", "did",
        "do", "does", "doing", "done", "down", "during", "each", "either", "else", "enough", "even",
        "ever", "every", "everyone", "everything", "except", "few", "for", "from", "further", "had",
        "has", "have", "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
        "however", "i", "if", "in", "inside", "into", "is", "it", "its", "itself", "just", "least",
        "less", "like", "many", "may", "me", "might", "mine", "more", "most", "much", "must", "my",
        "myself", "near", "neither", "never", "no", "nobody", "none", "nor", "not", "nothing", "now",
        "of", "off", "often", "on", "once", "one", "only", "onto", "or", "other", "others", "otherwise",
        "ought", "our", "ours", "ourselves", "out", "outside", "over", "own", "per", "perhaps", "quite",
        "rather", "same", "several", "shall", "she", "should", "since", "so", "some", "someone",
        "something", "sometimes", "soon", "still", "such", "than", "that", "the", "their", "theirs",
        "them", "themselves", "then", "there", "therefore", "these", "they", "this", "those", "though",
        "through", "throughout", "thus", "to", "together", "too", "toward", "towards", "under",
        "unless", "until", "up", "upon", "us", "very", "via", "was", "we", "were", "what", "whatever",
        "when", "whenever", "where", "whereas", "wherever", "whether", "which", "while", "who",
        "whoever", "whom", "whose", "why", "will", "with", "within", "without", "would", "yet", "you",
        "your", "yours", "yourself", "yourselves", "s", "t", "also", "already", "yes", "well", "back",
        "away", "ago", "instead", "indeed", "nevertheless", "meanwhile", "hence", "whereby"};
    return words;
}

// Frequent verbs in their inflected forms.
const std::unordered_set<std::string_view>& common_verbs() {
    static const std::unordered_set<std::string_view> words = {
        "say", "says", "said", "make", "makes", "made", "go", "goes", "went", "gone", "take", "takes",
        "took", "taken", "come", "comes", "came", "see", "sees", "saw", "seen", "know", "knows", "knew",
        "known", "get", "gets", "got", "gotten", "give", "gives", "gave", "given", "find", "finds",
        "found", "think", "thinks", "thought", "tell", "tells", "told", "become", "becomes", "became",
        "show", "shows", "showed", "shown", "leave", "leaves", "left", "feel", "feels", "felt", "put",
        "puts", "bring", "brings", "brought", "begin", "begins", "began", "begun", "keep", "keeps",
        "kept", "hold", "holds", "held", "write", "writes", "wrote", "written", "stand", "stands",
        "stood", "hear", "hears", "heard", "let", "lets", "mean", "means", "meant", "set", "sets",
        "meet", "meets", "met", "run", "runs", "ran", "pay", "pays", "paid", "sit", "sits", "sat",
        "speak", "speaks", "spoke", "spoken", "lie", "lies", "lay", "lain", "lead", "leads", "led",
        "read", "reads", "grow", "grows", "grew", "grown", "lose", "loses", "lost", "fall", "falls",
        "fell", "fallen", "send", "sends", "sent", "build", "builds", "built", "understand",
        "understands", "understood", "draw", "draws", "drew", "drawn", "break", "breaks", "broke",
        "broken", "spend", "spends", "spent", "cut", "cuts", "rise", "rises", "rose", "risen", "drive",
        "drives", "drove", "driven", "buy", "buys", "bought", "wear", "wears", "wore", "worn",
        "choose", "chooses", "chose", "chosen", "seek", "seeks", "sought", "throw", "throws", "threw",
        "thrown", "catch", "catches", "caught", "win", "wins", "won", "include", "includes", "contain",
        "contains", "perform", "performs", "use", "uses", "want", "wants", "seem", "seems", "help",
        "helps", "try", "tries", "ask", "asks", "need", "needs", "become", "remain", "remains",
        "appear", "appears", "allow", "allows", "provide", "provides", "require", "requires",
        "consider", "considers", "describe", "describes", "suggest", "suggests", "indicate",
        "indicates", "reveal", "reveals", "cause", "causes", "occur", "occurs", "exist", "exists",
        "play", "plays", "live", "lives", "believe", "believes", "happen", "happens", "call", "calls",
        "work", "works", "move", "moves", "turn", "turns", "start", "starts", "serve", "serves",
        "release", "releases", "record", "records", "known"};
    return words;
}

// Words ending in -ly that are not adverbs.
const std::unordered_set<std::string_view>& ly_nouns_adjectives() {
    static const std::unordered_set<std::string_view> words = {
        "family", "italy", "july", "supply", "reply", "assembly", "rally", "ally", "belly", "jelly",
        "bully", "lily", "fly", "butterfly", "monopoly", "anomaly", "melancholy", "holy", "early",
        "daily", "weekly", "monthly", "yearly", "friendly", "lovely", "likely", "elderly", "lonely",
        "ugly", "silly", "costly", "deadly", "orderly", "curly", "only", "homily", "doily", "folly",
        "gully", "sully", "tally", "dolly", "emily", "kelly", "molly", "sicily", "mccarthy"};
    return words;
}

bool all_digits(std::string_view w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Gap between two words inside a phrase: spaces or a single hyphen/apostrophe
// joiner. Anything else (sentence punctuation, commas, brackets) breaks it.
bool joins_phrase(std::string_view gap) {
    bool saw_joiner = false;
    for (char c : gap) {
        if (c == ' ' || c == '\t') continue;
        if ((c == '-' || c == '\'') && !saw_joiner) {
            saw_joiner = true;
            continue;
        }
        return false;
    }
    return true;
}

}  // namespace

WordClass classify_word(std::string_view w) {
    if (all_digits(w)) return WordClass::number;
    if (function_words().contains(w)) return WordClass::function;
    if (common_verbs().contains(w)) return WordClass::verb;
    if (w.size() > 4 && w.ends_with("ly") && !ly_nouns_adjectives().contains(w)) return WordClass::adverb;
    if (w.size() > 4 && w.ends_with("ed") && !w.ends_with("eed")) return WordClass::verb;
    if (w.size() > 5 && w.ends_with("ing")) return WordClass::verb;
    return WordClass::content;
}

std::vector<KeyphraseCandidate> extract_candidates(const std::vector<std::string_view>& segments,
                                                   const TopicRankOptions& options) {
    std::vector<KeyphraseCandidate> candidates;
    std::unordered_map<std::string, std::size_t> index_of;

    std::size_t offset = 0;  // running word offset across segments
    for (std::string_view text : segments) {
        const auto words = split_words(text);

        auto flush = [&](std::size_t first, std::size_t last) {  // [first, last)
            if (first >= last) return;
            const std::size_t count = last - first;
            if (count > options.max_words) return;
            std::string phrase;
            std::set<std::string> stems;
            for (std::size_t i = first; i < last; ++i) {
                const auto& w = words[i].word;
                if (w.size() < options.min_word_chars) return;
                if (!phrase.empty()) phrase += ' ';
                phrase += w;
                stems.insert(porter_stem(w));
            }
            if (phrase.size() < options.min_phrase_chars) return;
            auto [it, fresh] = index_of.emplace(phrase, candidates.size());
            if (fresh) candidates.push_back({phrase, std::move(stems), {}});
            candidates[it->second].offsets.push_back(offset + first);
        };

        std::size_t run_start = 0;
        bool in_run = false;
        for (std::size_t i = 0; i < words.size(); ++i) {
            const bool content = classify_word(words[i].word) == WordClass::content;
            const bool continues =
                in_run && content && joins_phrase(text.substr(words[i - 1].end, words[i].begin - words[i - 1].end));
            if (continues) continue;
            if (in_run) flush(run_start, i);
            in_run = content;
            run_start = i;
        }
        if (in_run) flush(run_start, words.size());
        offset += words.size();
    }
    return candidates;
}

double stem_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& s : a) common += b.count(s);
    const std::size_t uni = a.size() + b.size() - common;
    return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<std::vector<std::size_t>> cluster_candidates(const std::vector<KeyphraseCandidate>& candidates,
                                                         double min_overlap) {
    const std::size_t n = candidates.size();
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
    if (n < 2) return clusters;

    // Cluster-to-cluster average distances, updated by Lance-Williams.
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dist[i][j] = dist[j][i] = stem_distance(candidates[i].stems, candidates[j].stems);
        }
    }
    std::vector<bool> alive(n, true);
    const double max_distance = 1.0 - min_overlap;
    constexpr double kEps = 1e-12;

    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        std::size_t bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (alive[j] && dist[i][j] < best) {
                    best = dist[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best > max_distance + kEps) break;

        const double si = static_cast<double>(clusters[bi].size());
        const double sj = static_cast<double>(clusters[bj].size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!alive[k] || k == bi || k == bj) continue;
            dist[bi][k] = dist[k][bi] = (si * dist[bi][k] + sj * dist[bj][k]) / (si + sj);
        }
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters[bj].clear();
        alive[bj] = false;
    }

    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (alive[i]) out.push_back(std::move(clusters[i]));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

TopicGraph build_topic_graph(const std::vector<KeyphraseCandidate>& candidates,
                             std::vector<std::vector<std::size_t>> topics) {
    TopicGraph graph;
    graph.topics = std::move(topics);
    const std::size_t n = graph.topics.size();
    graph.weights.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double w = 0.0;
            for (std::size_t ci : graph.topics[i]) {
                for (std::size_t cj : graph.topics[j]) {
                    for (std::size_t pi : candidates[ci].offsets) {
                        for (std::size_t pj : candidates[cj].offsets) {
                            const auto gap = pi > pj ? pi - pj : pj - pi;
                            if (gap > 0) w += 1.0 / static_cast<double>(gap);
                        }
                    }
                }
            }
            graph.weights[i][j] = graph.weights[j][i] = w;
        }
    }
    graph.scores.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    return graph;
}

void rank_topics(TopicGraph& graph, const TopicRankOptions& options) {
    const std::size_t n = graph.topics.size();
    graph.iterations = 0;
    if (n == 0) return;
    const double uniform = 1.0 / static_cast<double>(n);
    std::vector<double> out_weight(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        out_weight[j] = std::accumulate(graph.weights[j].begin(), graph.weights[j].end(), 0.0);
    }

    std::vector<double> score(n, uniform);
    std::vector<double> next(n);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        double dangling = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (out_weight[j] == 0.0) dangling += score[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double incoming = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (out_weight[j] > 0.0) incoming += graph.weights[j][i] / out_weight[j] * score[j];
            }
            next[i] = (1.0 - options.damping) * uniform + options.damping * (incoming + dangling * uniform);
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - score[i]);
        score.swap(next);
        graph.iterations = iter + 1;
        if (change < options.tolerance) break;
    }
    graph.scores = std::move(score);
}

namespace {

std::vector<std::string> top_phrases(const std::vector<std::string_view>& segments, const TopicRankOptions& options) {
    const auto candidates = extract_candidates(segments, options);
    if (candidates.empty() || options.num_phrases == 0) return {};

    TopicGraph graph = build_topic_graph(candidates, cluster_candidates(candidates, options.min_stem_overlap));
    rank_topics(graph, options);

    // Representative: the member occurring first in the document.
    auto first_offset = [&](std::size_t c) { return candidates[c].offsets.front(); };
    std::vector<std::size_t> representative(graph.topics.size());
    for (std::size_t t = 0; t < graph.topics.size(); ++t) {
        representative[t] = *std::min_element(graph.topics[t].begin(), graph.topics[t].end(),
                                              [&](auto a, auto b) { return first_offset(a) < first_offset(b); });
    }

    std::vector<std::size_t> order(graph.topics.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (graph.scores[a] != graph.scores[b]) return graph.scores[a] > graph.scores[b];
        return first_offset(representative[a]) < first_offset(representative[b]);
    });

    std::vector<std::string> phrases;
    std::unordered_set<std::string_view> seen;
    for (std::size_t t : order) {
        if (phrases.size() == options.num_phrases) break;
        const std::string& phrase = candidates[representative[t]].phrase;
        if (seen.insert(phrase).second) phrases.push_back(phrase);
    }
    return phrases;
}

}  // namespace

KeyphraseSet extract_keyphrases(const Document& document, const TopicRankOptions& options) {
    std::vector<std::string_view> segments;
    segments.reserve(document.passages.size());
    for (const auto& p : document.passages) segments.push_back(p.text);
    return {document.doc_id, top_phrases(segments, options)};
}

std::vector<std::string> extract_keyphrases(std::string_view text, const TopicRankOptions& options) {
    return top_phrases({text}, options);
}

}  // namespace docaware
