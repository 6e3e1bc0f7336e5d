#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace docaware {

/// Collects non-fatal warnings from loaders and transforms.
///
/// Warnings are counted per category; the first few messages of each
/// category are retained verbatim so a summary can show examples.
/// Safe to share across threads.
class Diagnostics {
public:
    static constexpr std::size_t kSamplesPerCategory = 3;

    void warn(std::string_view category, std::string message);

    std::size_t count(std::string_view category) const;
    std::size_t total() const;
    bool empty() const { return total() == 0; }

    /// One line per category: `warning: <category> x<count> (e.g. <sample>)`.
    void summarize(std::ostream& out) const;

private:
    struct Entry {
        std::size_t count = 0;
        std::vector<std::string> samples;
    };
    mutable std::mutex mutex_;
    std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace docaware
