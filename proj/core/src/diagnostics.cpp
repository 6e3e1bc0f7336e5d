#include "docaware/diagnostics.hpp"

namespace docaware {

void Diagnostics::warn(std::string_view category, std::string message) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(category);
    if (it == entries_.end()) {
        it = entries_.emplace(std::string(category), Entry{}).first;
    }
    ++it->second.count;
    if (it->second.samples.size() < kSamplesPerCategory) {
        it->second.samples.push_back(std::move(message));
    }
}

std::size_t Diagnostics::count(std::string_view category) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(category);
    return it == entries_.end() ? 0 : it->second.count;
}

std::size_t Diagnostics::total() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& [_, entry] : entries_) n += entry.count;
    return n;
}

void Diagnostics::summarize(std::ostream& out) const {
    std::lock_guard lock(mutex_);
    for (const auto& [category, entry] : entries_) {
        out << "warning: " << category << " x" << entry.count;
        if (!entry.samples.empty()) {
            out << " (e.g. " << entry.samples.front() << ")";
        }
        out << '\n';
    }
}

}  // namespace docaware
