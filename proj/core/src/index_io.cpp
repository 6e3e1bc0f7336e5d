#include <bit>
#include <cstring>

#include <nlohmann/json.hpp>

#include "docaware/errors.hpp"
#include "docaware/file_util.hpp"
#include "docaware/inverted_index.hpp"

// Index artifact layout (all integers little-endian):
//   manifest.json  format, version, granularity, num_candidates, avg_length,
//                  num_terms, include_titles, tokenizer
//   postings.bin   "DAIX" u32:version u8:granularity u8:include_titles
//                  u64:N  N x (str:id u32:length)
//                  u64:T  T x (str:term u64:count count x (u32:candidate u32:tf))
//                  f64:avg_length
// where str is u32 byte length followed by the bytes. Terms are sorted.

namespace docaware {

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr char kMagic[4] = {'D', 'A', 'I', 'X'};

static_assert(std::endian::native == std::endian::little, "index IO assumes a little-endian host");

class Writer {
public:
    void raw(const void* data, std::size_t n) { buf_.append(static_cast<const char*>(data), n); }
    template <typename T>
    void put(T value) {
        raw(&value, sizeof(T));
    }
    void str(std::string_view s) {
        put(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    std::string& buffer() { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(std::string_view data, std::string source) : data_(data), source_(std::move(source)) {}

    void raw(void* out, std::size_t n) {
        if (data_.size() - pos_ < n) throw ParseError(source_, 0, "truncated index file");
        std::memcpy(out, data_.data() + pos_, n);
        pos_ += n;
    }
    template <typename T>
    T get() {
        T value;
        raw(&value, sizeof(T));
        return value;
    }
    std::string str() {
        const auto n = get<std::uint32_t>();
        if (data_.size() - pos_ < n) throw ParseError(source_, 0, "truncated index file");
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == data_.size(); }
    const std::string& source() const { return source_; }

private:
    std::string_view data_;
    std::size_t pos_ = 0;
    std::string source_;
};

}  // namespace

std::string index_manifest(const InvertedIndex& index) {
    nlohmann::ordered_json manifest;
    manifest["format"] = "docaware-index";
    manifest["version"] = kFormatVersion;
    manifest["granularity"] = std::string(to_string(index.granularity()));
    manifest["num_candidates"] = index.num_candidates();
    manifest["avg_length"] = index.avg_length();
    manifest["num_terms"] = index.num_terms();
    manifest["include_titles"] = index.include_titles();
    manifest["tokenizer"] = std::string(kTokenizerVersion);
    return manifest.dump(2) + "\n";
}

void write_index(const InvertedIndex& index, const std::filesystem::path& dir) {
    Writer w;
    w.raw(kMagic, sizeof(kMagic));
    w.put(kFormatVersion);
    w.put(static_cast<std::uint8_t>(index.granularity() == Granularity::passage ? 0 : 1));
    w.put(static_cast<std::uint8_t>(index.include_titles() ? 1 : 0));
    w.put(static_cast<std::uint64_t>(index.num_candidates()));
    for (std::uint32_t i = 0; i < index.num_candidates(); ++i) {
        w.str(index.candidate_id(i));
        w.put(index.length(i));
    }
    const auto terms = index.sorted_terms();
    w.put(static_cast<std::uint64_t>(terms.size()));
    for (auto term : terms) {
        w.str(term);
        const auto postings = index.postings(term);
        w.put(static_cast<std::uint64_t>(postings.size()));
        for (const auto& p : postings) {
            w.put(p.candidate);
            w.put(p.tf);
        }
    }
    w.put(index.avg_length());

    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "postings.bin", w.buffer());
    write_file_atomic(dir / "manifest.json", index_manifest(index));
}

InvertedIndex read_index(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    const auto postings_path = dir / "postings.bin";
    if (!std::filesystem::exists(manifest_path) || !std::filesystem::exists(postings_path)) {
        throw IoError("no index at " + dir.string());
    }
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(manifest_path.string(), 0, e.what());
    }
    if (manifest.value("format", "") != "docaware-index" || manifest.value("version", 0u) != kFormatVersion) {
        throw ParseError(manifest_path.string(), 0, "unsupported index format");
    }
    if (manifest.value("tokenizer", "") != kTokenizerVersion) {
        throw ValidationError(manifest_path.string() + ": built with tokenizer '" +
                              manifest.value("tokenizer", "") + "', expected '" +
                              std::string(kTokenizerVersion) + "'");
    }

    const std::string data = read_file(postings_path);
    Reader r(data, postings_path.string());
    char magic[4];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || r.get<std::uint32_t>() != kFormatVersion) {
        throw ParseError(r.source(), 0, "not a docaware postings file");
    }

    InvertedIndex index;
    index.granularity_ = r.get<std::uint8_t>() == 0 ? Granularity::passage : Granularity::document;
    index.include_titles_ = r.get<std::uint8_t>() != 0;
    const auto n = r.get<std::uint64_t>();
    index.ids_.reserve(n);
    index.lengths_.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        index.ids_.push_back(r.str());
        index.lengths_.push_back(r.get<std::uint32_t>());
    }
    const auto num_terms = r.get<std::uint64_t>();
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        std::string term = r.str();
        const auto count = r.get<std::uint64_t>();
        std::vector<Posting> postings(count);
        for (auto& p : postings) {
            p.candidate = r.get<std::uint32_t>();
            p.tf = r.get<std::uint32_t>();
            if (p.candidate >= n) throw ParseError(r.source(), 0, "posting names an unknown candidate");
        }
        index.postings_.emplace(std::move(term), std::move(postings));
    }
    const double stored_avg = r.get<double>();
    if (!r.done()) throw ParseError(r.source(), 0, "trailing bytes in index file");

    index.finalize();
    if (index.avg_length_ != stored_avg) {
        throw ValidationError(r.source() + ": stored avg_length does not match candidate lengths");
    }
    if (manifest.value("num_candidates", std::uint64_t{0}) != n ||
        manifest.value("granularity", "") != to_string(index.granularity_)) {
        throw ValidationError(manifest_path.string() + ": manifest disagrees with postings");
    }
    return index;
}

}  // namespace docaware
