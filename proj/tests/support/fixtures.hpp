#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "docaware/corpus.hpp"
#include "docaware/fusion.hpp"
#include "docaware/ranking.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return DOCAWARE_TEST_DATA; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("docaware-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline docaware::Document make_doc(const std::string& id, std::optional<std::string> title,
                                   const std::vector<std::string>& texts) {
    docaware::Document doc{id, std::move(title), {}};
    for (std::size_t i = 0; i < texts.size(); ++i) {
        doc.passages.push_back({id + "#" + std::to_string(i + 1), texts[i], id, static_cast<int>(i) + 1});
    }
    return doc;
}

/// Random document collection: `docs` documents with 1..max_passages
/// passages each, ids d<i> and d<i>#<position>.
struct RandomCollection {
    std::vector<std::string> doc_ids;
    std::map<std::string, std::vector<std::string>> doc_passages;
    std::map<std::string, std::string> parent;
    std::vector<std::string> passage_ids;

    docaware::DocToPassageMap mapping() const {
        docaware::DocToPassageMap map;
        for (const auto& [d, ps] : doc_passages) map.add(d, ps);
        return map;
    }
};

inline RandomCollection random_collection(std::mt19937_64& rng, int docs, int max_passages) {
    RandomCollection c;
    std::uniform_int_distribution<int> count(1, max_passages);
    for (int d = 0; d < docs; ++d) {
        const std::string doc = "d" + std::to_string(d);
        c.doc_ids.push_back(doc);
        const int n = count(rng);
        for (int p = 1; p <= n; ++p) {
            const std::string pid = doc + "#" + std::to_string(p);
            c.doc_passages[doc].push_back(pid);
            c.parent[pid] = doc;
            c.passage_ids.push_back(pid);
        }
    }
    return c;
}

/// Ranking over a random subset of `ids`. Scores are drawn from a small
/// integer grid half the time so ties are common.
inline docaware::Ranking random_ranking(std::mt19937_64& rng, std::vector<std::string> ids, std::size_t max_items,
                                        const std::string& query_id = "q") {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_int_distribution<std::size_t> size(0, std::min(max_items, ids.size()));
    ids.resize(size(rng));
    const bool coarse = std::bernoulli_distribution(0.5)(rng);
    std::uniform_real_distribution<double> fine(-5.0, 30.0);
    std::uniform_int_distribution<int> grid(0, 4);
    docaware::Ranking r;
    r.query_id = query_id;
    for (auto& id : ids) r.items.push_back({id, coarse ? static_cast<double>(grid(rng)) : fine(rng)});
    docaware::sort_ranking(r);
    return r;
}

}  // namespace fixtures
