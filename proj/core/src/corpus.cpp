#include "docaware/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "docaware/errors.hpp"
#include "docaware/file_util.hpp"

namespace docaware {

using nlohmann::json;

namespace {

// Calls fn(line, 1-based line number) for each line; a trailing '\r' is dropped.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line, line_no);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

}  // namespace

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
    for (std::size_t d = 0; d < documents_.size(); ++d) {
        Document& doc = documents_[d];
        if (doc.doc_id.empty()) throw ValidationError("document with empty doc_id");
        if (!doc_index_.emplace(doc.doc_id, d).second) {
            throw ValidationError("duplicate doc_id '" + doc.doc_id + "'");
        }
        if (doc.title && trim(*doc.title).empty()) doc.title.reset();
        if (doc.passages.empty()) {
            throw ValidationError("document '" + doc.doc_id + "' has no passages");
        }
        for (std::size_t p = 0; p < doc.passages.size(); ++p) {
            const Passage& passage = doc.passages[p];
            if (passage.doc_id != doc.doc_id) {
                throw ValidationError("passage '" + passage.passage_id + "' names parent '" +
                                      passage.doc_id + "' inside document '" + doc.doc_id + "'");
            }
            if (passage.position != static_cast<int>(p) + 1) {
                throw ValidationError("document '" + doc.doc_id +
                                      "' passage positions are not contiguous from 1");
            }
            if (trim(passage.text).empty()) {
                throw ValidationError("passage '" + passage.passage_id + "' has blank text");
            }
            if (passage.passage_id.empty()) {
                throw ValidationError("document '" + doc.doc_id + "' has a passage with empty id");
            }
            if (!passage_index_.emplace(passage.passage_id, std::pair{d, p}).second) {
                throw ValidationError("duplicate passage_id '" + passage.passage_id + "'");
            }
        }
        passage_count_ += doc.passages.size();
    }
}

const Document* Corpus::find_document(std::string_view doc_id) const {
    auto it = doc_index_.find(std::string(doc_id));
    return it == doc_index_.end() ? nullptr : &documents_[it->second];
}

const Passage* Corpus::find_passage(std::string_view passage_id) const {
    auto it = passage_index_.find(std::string(passage_id));
    if (it == passage_index_.end()) return nullptr;
    return &documents_[it->second.first].passages[it->second.second];
}

// ---------------------------------------------------------------------------
// Corpus JSONL

namespace {

Document parse_document(const json& record, std::string_view source, std::size_t line_no) {
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError(std::string(source), line_no, what);
    };
    if (!record.is_object()) throw fail("expected a JSON object");

    Document doc;
    auto id = record.find("doc_id");
    if (id == record.end() || !id->is_string()) throw fail("missing string field 'doc_id'");
    doc.doc_id = id->get<std::string>();

    if (auto title = record.find("title"); title != record.end() && !title->is_null()) {
        if (!title->is_string()) throw fail("'title' must be a string or null");
        doc.title = title->get<std::string>();
    }

    auto passages = record.find("passages");
    if (passages == record.end() || !passages->is_array()) {
        throw fail("missing array field 'passages'");
    }
    bool any_position = false;
    bool all_positions = true;
    for (const auto& item : *passages) {
        Passage passage;
        passage.doc_id = doc.doc_id;
        if (item.is_string()) {
            passage.text = item.get<std::string>();
        } else if (item.is_object()) {
            auto text = item.find("text");
            if (text == item.end() || !text->is_string()) throw fail("passage without string 'text'");
            passage.text = text->get<std::string>();
            if (auto pos = item.find("position"); pos != item.end() && !pos->is_null()) {
                if (!pos->is_number_integer()) throw fail("'position' must be an integer");
                passage.position = pos->get<int>();
            }
            if (auto pid = item.find("passage_id"); pid != item.end() && !pid->is_null()) {
                if (!pid->is_string()) throw fail("'passage_id' must be a string");
                passage.passage_id = pid->get<std::string>();
            }
        } else {
            throw fail("passage must be an object or string");
        }
        any_position = any_position || passage.position != 0;
        all_positions = all_positions && passage.position != 0;
        doc.passages.push_back(std::move(passage));
    }

    if (any_position && !all_positions) {
        throw ValidationError("document '" + doc.doc_id + "' mixes passages with and without positions");
    }
    if (any_position) {
        std::stable_sort(doc.passages.begin(), doc.passages.end(),
                         [](const Passage& a, const Passage& b) { return a.position < b.position; });
    } else {
        for (std::size_t i = 0; i < doc.passages.size(); ++i) {
            doc.passages[i].position = static_cast<int>(i) + 1;
        }
    }
    for (auto& passage : doc.passages) {
        if (passage.passage_id.empty()) {
            passage.passage_id = doc.doc_id + "#" + std::to_string(passage.position);
        }
    }
    return doc;
}

}  // namespace

Corpus parse_corpus(std::string_view jsonl, std::string_view source) {
    std::vector<Document> docs;
    std::unordered_map<std::string, std::size_t> seen;
    for_each_line(jsonl, [&](std::string_view line, std::size_t line_no) {
        if (trim(line).empty()) return;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string(source), line_no, std::string("malformed JSON: ") + e.what());
        }
        Document doc = parse_document(record, source, line_no);
        if (auto [it, fresh] = seen.emplace(doc.doc_id, line_no); !fresh) {
            throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                                  ": duplicate doc_id '" + doc.doc_id + "' (first seen on line " +
                                  std::to_string(it->second) + ")");
        }
        if (doc.passages.empty()) {
            throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                                  ": document '" + doc.doc_id + "' has no passages");
        }
        docs.push_back(std::move(doc));
    });
    return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path) {
    return parse_corpus(read_file(path), path.string());
}

std::string serialize_corpus(const Corpus& corpus) {
    std::string out;
    for (const Document& doc : corpus.documents()) {
        json record;
        record["doc_id"] = doc.doc_id;
        record["title"] = doc.title ? json(*doc.title) : json(nullptr);
        json passages = json::array();
        for (const Passage& p : doc.passages) {
            passages.push_back({{"passage_id", p.passage_id}, {"position", p.position}, {"text", p.text}});
        }
        record["passages"] = std::move(passages);
        out += record.dump(-1, ' ', false, json::error_handler_t::replace);
        out += '\n';
    }
    return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_corpus(corpus));
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Query> parse_queries(std::string_view tsv, Split split, std::string_view source) {
    std::vector<Query> queries;
    std::unordered_map<std::string, std::size_t> seen;
    for_each_line(tsv, [&](std::string_view line, std::size_t line_no) {
        if (trim(line).empty()) return;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(std::string(source), line_no, "expected 'query_id<TAB>text'");
        }
        Query q;
        q.query_id = std::string(trim(line.substr(0, tab)));
        q.text = std::string(line.substr(tab + 1));
        q.split = split;
        if (q.query_id.empty()) throw ParseError(std::string(source), line_no, "empty query id");
        if (trim(q.text).empty()) {
            throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": query '" +
                                  q.query_id + "' has empty text");
        }
        if (!seen.emplace(q.query_id, line_no).second) {
            throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                                  ": duplicate query id '" + q.query_id + "'");
        }
        queries.push_back(std::move(q));
    });
    return queries;
}

std::vector<Query> load_queries(const std::filesystem::path& path, Split split) {
    return parse_queries(read_file(path), split, path.string());
}

// ---------------------------------------------------------------------------
// Judgments

int max_grade(GradeScale scale) { return scale == GradeScale::binary ? 1 : 2; }

GradeScale parse_grade_scale(std::string_view name) {
    if (name == "binary") return GradeScale::binary;
    if (name == "three_scale" || name == "three-scale" || name == "3") return GradeScale::three_scale;
    throw InvalidArgument("unknown grade scale '" + std::string(name) + "'");
}

const std::map<std::string, int>* JudgmentSet::find(std::string_view query_id) const {
    auto it = entries.find(std::string(query_id));
    return it == entries.end() ? nullptr : &it->second;
}

std::size_t JudgmentSet::relevant_count(std::string_view query_id) const {
    const auto* grades = find(query_id);
    if (!grades) return 0;
    return static_cast<std::size_t>(
        std::count_if(grades->begin(), grades->end(), [](const auto& kv) { return kv.second > 0; }));
}

JudgmentSet parse_judgments(std::string_view qrels, GradeScale scale, Diagnostics* diag,
                            std::string_view source) {
    JudgmentSet judgments;
    judgments.scale = scale;
    const int top = max_grade(scale);
    for_each_line(qrels, [&](std::string_view line, std::size_t line_no) {
        const auto fields = split_whitespace(line);
        if (fields.empty()) return;
        if (fields.size() != 4) {
            throw ParseError(std::string(source), line_no,
                             "expected 'query_id iter passage_id grade', got " +
                                 std::to_string(fields.size()) + " fields");
        }
        int grade = 0;
        const auto g = fields[3];
        auto [ptr, ec] = std::from_chars(g.data(), g.data() + g.size(), grade);
        if (ec != std::errc{} || ptr != g.data() + g.size()) {
            throw ParseError(std::string(source), line_no, "non-integer grade '" + std::string(g) + "'");
        }
        if (grade < 0 || grade > top) {
            throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": grade " +
                                  std::to_string(grade) + " outside the " +
                                  (scale == GradeScale::binary ? "binary" : "three_scale") + " scale");
        }
        auto& grades = judgments.entries[std::string(fields[0])];
        auto [it, fresh] = grades.insert_or_assign(std::string(fields[2]), grade);
        if (!fresh && diag) {
            diag->warn("duplicate-judgment", std::string(fields[0]) + " " + std::string(fields[2]));
        }
    });
    return judgments;
}

JudgmentSet load_judgments(const std::filesystem::path& path, GradeScale scale, Diagnostics* diag) {
    return parse_judgments(read_file(path), scale, diag, path.string());
}

std::size_t validate_judgments(const JudgmentSet& judgments, const Corpus& corpus, Validation mode,
                               Diagnostics* diag) {
    std::size_t flagged = 0;
    for (const auto& [query_id, grades] : judgments.entries) {
        for (const auto& [passage_id, grade] : grades) {
            if (corpus.find_passage(passage_id)) continue;
            if (mode == Validation::strict) {
                throw ValidationError("judged passage '" + passage_id + "' (query '" + query_id +
                                      "') is not in the corpus");
            }
            ++flagged;
            if (diag) diag->warn("unknown-judged-passage", query_id + " " + passage_id);
        }
    }
    return flagged;
}

// ---------------------------------------------------------------------------
// Subsets

QuerySubset parse_subset(std::string_view text, std::string name) {
    QuerySubset subset;
    subset.name = std::move(name);
    for_each_line(text, [&](std::string_view line, std::size_t) {
        const auto id = trim(line);
        if (!id.empty()) subset.query_ids.emplace(id);
    });
    return subset;
}

QuerySubset load_subset(const std::filesystem::path& path) {
    return parse_subset(read_file(path), path.stem().string());
}

// ---------------------------------------------------------------------------
// Depth statistics

DepthSummary depth_stats(const Corpus& corpus, const JudgmentSet& judgments) {
    DepthSummary summary;
    std::vector<int> positions;
    for (const auto& [query_id, grades] : judgments.entries) {
        for (const auto& [passage_id, grade] : grades) {
            if (grade <= 0) continue;
            const Passage* passage = corpus.find_passage(passage_id);
            if (!passage) {
                ++summary.missing;
                continue;
            }
            positions.push_back(passage->position);
            ++summary.histogram[passage->position];
        }
    }
    if (positions.empty()) return summary;

    summary.no_judgments = false;
    summary.count = positions.size();
    double sum = 0.0;
    for (int p : positions) sum += p;
    summary.mean = sum / static_cast<double>(positions.size());
    double sq = 0.0;
    for (int p : positions) sq += (p - summary.mean) * (p - summary.mean);
    summary.stddev = std::sqrt(sq / static_cast<double>(positions.size()));
    return summary;
}

}  // namespace docaware
