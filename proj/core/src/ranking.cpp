#include "docaware/ranking.hpp"

#include <algorithm>
#include <unordered_set>

#include "docaware/errors.hpp"

namespace docaware {

void sort_ranking(Ranking& ranking) {
    std::sort(ranking.items.begin(), ranking.items.end(), ranks_before);
}

bool is_well_ordered(const Ranking& ranking) {
    const auto& items = ranking.items;
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (!ranks_before(items[i - 1], items[i])) return false;
    }
    return true;
}

void check_ranking(const Ranking& ranking) {
    std::unordered_set<std::string_view> seen;
    for (const auto& item : ranking.items) {
        if (!seen.insert(item.id).second) {
            throw ValidationError("ranking for '" + ranking.query_id + "' repeats candidate '" +
                                  item.id + "'");
        }
    }
    if (!is_well_ordered(ranking)) {
        throw ValidationError("ranking for '" + ranking.query_id + "' is not in score order");
    }
}

Ranking truncate(const Ranking& ranking, std::size_t k) {
    Ranking out;
    out.query_id = ranking.query_id;
    const auto n = std::min(k, ranking.items.size());
    out.items.assign(ranking.items.begin(), ranking.items.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

}  // namespace docaware
