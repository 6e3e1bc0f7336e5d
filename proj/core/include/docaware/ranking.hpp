#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace docaware {

struct ScoredCandidate {
    std::string id;
    double score = 0.0;

    friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

/// The ranking order: score descending, ties by ascending id.
inline bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
}

/// Per-query ordered candidate list. Scores are non-increasing, ties are
/// ordered by ascending id, and ids are unique.
struct Ranking {
    std::string query_id;
    std::vector<ScoredCandidate> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }

    friend bool operator==(const Ranking&, const Ranking&) = default;
};

/// Rankings of a whole run keyed by query id.
using Run = std::map<std::string, Ranking>;

/// Puts items into ranking order.
void sort_ranking(Ranking& ranking);

/// Throws ValidationError when the order contract or id uniqueness fails.
void check_ranking(const Ranking& ranking);

bool is_well_ordered(const Ranking& ranking);

/// Copy of the first `k` items.
Ranking truncate(const Ranking& ranking, std::size_t k);

}  // namespace docaware
