#include "docaware/contextualizer.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "docaware/errors.hpp"
#include "docaware/file_util.hpp"
#include "docaware/parallel.hpp"

namespace docaware {

using nlohmann::json;

namespace {

template <typename Rewrite>
Corpus rewrite_passages(const Corpus& corpus, Rewrite&& rewrite) {
    std::vector<Document> docs = corpus.documents();
    for (auto& doc : docs) {
        for (auto& passage : doc.passages) rewrite(doc, passage);
    }
    return Corpus(std::move(docs));
}

// Byte offset of every code point boundary; size() == code points + 1.
std::vector<std::size_t> code_point_offsets(std::string_view text) {
    std::vector<std::size_t> offsets;
    offsets.reserve(text.size() + 1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets.push_back(i);
    }
    offsets.push_back(text.size());
    return offsets;
}

std::size_t code_point_count(std::string_view text) { return code_point_offsets(text).size() - 1; }

template <typename Fn>
void for_each_jsonl(std::string_view text, std::string_view source, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (trim(line).empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string(source), line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object()) throw ParseError(std::string(source), line_no, "expected a JSON object");
        fn(record, line_no);
    }
}

}  // namespace

Corpus prepend_title(const Corpus& corpus) {
    return rewrite_passages(corpus, [](const Document& doc, Passage& passage) {
        if (doc.title) passage.text = *doc.title + " " + passage.text;
    });
}

// ---------------------------------------------------------------------------
// Keyphrases

KeyphraseMap extract_all_keyphrases(const Corpus& corpus, const TopicRankOptions& options, unsigned threads) {
    const auto& docs = corpus.documents();
    std::vector<KeyphraseSet> sets(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) { sets[i] = extract_keyphrases(docs[i], options); });
    KeyphraseMap out;
    for (auto& set : sets) out.emplace(set.doc_id, std::move(set));
    return out;
}

Corpus prepend_keyphrases(const Corpus& corpus, const KeyphraseMap& keyphrases, Diagnostics* diag) {
    std::map<std::string, std::string> prefixes;
    for (const auto& doc : corpus.documents()) {
        auto it = keyphrases.find(doc.doc_id);
        if (it == keyphrases.end()) {
            if (diag) diag->warn("missing-keyphrases", doc.doc_id);
            continue;
        }
        std::string prefix;
        for (const auto& phrase : it->second.phrases) {
            if (!prefix.empty()) prefix += ';';
            prefix += phrase;
        }
        if (!prefix.empty()) prefixes.emplace(doc.doc_id, std::move(prefix));
    }
    return rewrite_passages(corpus, [&](const Document& doc, Passage& passage) {
        if (auto it = prefixes.find(doc.doc_id); it != prefixes.end()) {
            passage.text = it->second + " " + passage.text;
        }
    });
}

std::string format_keyphrase_cache(const KeyphraseMap& keyphrases) {
    std::string out;
    for (const auto& [doc_id, set] : keyphrases) {
        json record;
        record["doc_id"] = doc_id;
        record["phrases"] = set.phrases;
        out += record.dump(-1, ' ', false, json::error_handler_t::replace);
        out += '\n';
    }
    return out;
}

KeyphraseMap parse_keyphrase_cache(std::string_view jsonl, std::string_view source) {
    KeyphraseMap out;
    for_each_jsonl(jsonl, source, [&](const json& record, std::size_t line_no) {
        KeyphraseSet set;
        try {
            set.doc_id = record.at("doc_id").get<std::string>();
            set.phrases = record.at("phrases").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            throw ParseError(std::string(source), line_no, e.what());
        }
        out.insert_or_assign(set.doc_id, std::move(set));
    });
    return out;
}

KeyphraseMap load_keyphrase_cache(const std::filesystem::path& path) {
    return parse_keyphrase_cache(read_file(path), path.string());
}

void write_keyphrase_cache(const KeyphraseMap& keyphrases, const std::filesystem::path& path) {
    write_file_atomic(path, format_keyphrase_cache(keyphrases));
}

// ---------------------------------------------------------------------------
// Coreference

std::vector<MentionRecord> parse_mentions(std::string_view jsonl, std::string_view source) {
    std::vector<MentionRecord> records;
    for_each_jsonl(jsonl, source, [&](const json& r, std::size_t line_no) {
        MentionRecord m;
        try {
            m.doc_id = r.at("doc_id").get<std::string>();
            m.passage_position = r.at("passage_position").get<int>();
            m.start = r.at("start").get<std::size_t>();
            m.end = r.at("end").get<std::size_t>();
            m.antecedent_text = r.at("antecedent_text").get<std::string>();
            m.antecedent_passage_position = r.at("antecedent_passage_position").get<int>();
            m.antecedent_start = r.at("antecedent_start").get<std::size_t>();
        } catch (const json::exception& e) {
            throw ParseError(std::string(source), line_no, e.what());
        }
        records.push_back(std::move(m));
    });
    return records;
}

std::vector<MentionRecord> load_mentions(const std::filesystem::path& path) {
    return parse_mentions(read_file(path), path.string());
}

Corpus annotate_coref(const Corpus& corpus, const std::vector<MentionRecord>& mentions, CorefStats* stats) {
    CorefStats local;
    CorefStats& st = stats ? *stats : local;
    st = {};

    auto reject = [](std::size_t index, const MentionRecord& m, const std::string& why) {
        return ValidationError(fmt::format("mention record #{} (doc '{}', passage {}, [{}, {})): {}", index, m.doc_id,
                                           m.passage_position, m.start, m.end, why));
    };

    // (doc, passage position, start, end) -> index of the record holding the
    // earliest antecedent seen so far.
    using SpanKey = std::tuple<std::string, int, std::size_t, std::size_t>;
    std::map<SpanKey, std::size_t> earliest;

    for (std::size_t i = 0; i < mentions.size(); ++i) {
        const MentionRecord& m = mentions[i];
        const Document* doc = corpus.find_document(m.doc_id);
        if (!doc) throw reject(i, m, "unknown document");
        const int n = static_cast<int>(doc->passages.size());
        if (m.passage_position < 1 || m.passage_position > n) throw reject(i, m, "unknown passage position");
        if (m.antecedent_passage_position < 1 || m.antecedent_passage_position > n) {
            throw reject(i, m, "unknown antecedent passage position");
        }
        const auto len = code_point_count(doc->passages[m.passage_position - 1].text);
        if (m.start >= m.end || m.end > len) throw reject(i, m, fmt::format("span out of bounds (passage length {})", len));
        const auto ante_len = code_point_count(doc->passages[m.antecedent_passage_position - 1].text);
        if (m.antecedent_start >= ante_len) throw reject(i, m, "antecedent start out of bounds");
        if (std::pair(m.antecedent_passage_position, m.antecedent_start) >= std::pair(m.passage_position, m.start)) {
            throw reject(i, m, "antecedent does not precede the mention");
        }

        SpanKey key{m.doc_id, m.passage_position, m.start, m.end};
        auto [it, fresh] = earliest.emplace(key, i);
        if (!fresh) {
            const MentionRecord& cur = mentions[it->second];
            if (std::pair(m.antecedent_passage_position, m.antecedent_start) <
                std::pair(cur.antecedent_passage_position, cur.antecedent_start)) {
                it->second = i;
            }
        }
    }

    // Cross-passage insertions grouped by passage.
    std::map<std::pair<std::string, int>, std::vector<const MentionRecord*>> by_passage;
    st.mentions = earliest.size();
    for (const auto& [key, index] : earliest) {
        const MentionRecord& m = mentions[index];
        if (m.antecedent_passage_position == m.passage_position) {
            ++st.same_passage;
            continue;
        }
        by_passage[{m.doc_id, m.passage_position}].push_back(&m);
    }

    std::vector<Document> docs = corpus.documents();
    for (auto& doc : docs) {
        for (auto& passage : doc.passages) {
            auto it = by_passage.find({doc.doc_id, passage.position});
            if (it == by_passage.end()) continue;
            auto& spans = it->second;
            std::sort(spans.begin(), spans.end(), [](const MentionRecord* a, const MentionRecord* b) {
                if (a->start != b->start) return a->start < b->start;
                return a->end > b->end;
            });
            std::vector<const MentionRecord*> kept;
            for (const MentionRecord* m : spans) {
                if (!kept.empty() && m->start < kept.back()->end) {
                    ++st.overlapping;
                    continue;
                }
                kept.push_back(m);
            }
            const auto offsets = code_point_offsets(passage.text);
            for (auto k = kept.rbegin(); k != kept.rend(); ++k) {
                passage.text.insert(offsets[(*k)->end], " (" + (*k)->antecedent_text + ")");
                ++st.inserted;
            }
        }
    }
    return Corpus(std::move(docs));
}

Transform parse_transform(std::string_view name) {
    if (name == "none") return Transform::none;
    if (name == "title") return Transform::title;
    if (name == "keyphrase" || name == "keyphrases") return Transform::keyphrase;
    if (name == "coref") return Transform::coref;
    throw InvalidArgument("unknown transform '" + std::string(name) + "'");
}

std::string_view to_string(Transform t) {
    switch (t) {
        case Transform::none: return "none";
        case Transform::title: return "title";
        case Transform::keyphrase: return "keyphrase";
        case Transform::coref: return "coref";
    }
    return "none";
}

}  // namespace docaware
