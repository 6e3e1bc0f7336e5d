#include "docaware/run_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "docaware/errors.hpp"
#include "docaware/file_util.hpp"

namespace docaware {

std::string format_run(const Run& run, std::string_view run_tag) {
    std::string out;
    for (const auto& [query_id, ranking] : run) {
        std::size_t rank = 0;
        for (const auto& item : ranking.items) {
            out += query_id;
            out += " Q0 ";
            out += item.id;
            out += ' ';
            out += std::to_string(++rank);
            out += ' ';
            out += format_exact(item.score);
            out += ' ';
            out += run_tag;
            out += '\n';
        }
    }
    return out;
}

void write_run(const Run& run, const std::filesystem::path& path, std::string_view run_tag) {
    write_file_atomic(path, format_run(run, run_tag));
}

Run parse_run(std::string_view text, Diagnostics* diag, std::string_view source) {
    Run run;
    std::unordered_map<std::string, std::unordered_set<std::string>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

        std::string_view fields[6];
        std::size_t n = 0;
        std::size_t i = 0;
        while (i < line.size() && n < 7) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i == start) break;
            if (n == 6) {
                n = 7;
                break;
            }
            fields[n++] = line.substr(start, i - start);
        }
        if (n == 0) continue;
        if (n != 6) {
            throw ParseError(std::string(source), line_no,
                             "expected 'query_id Q0 candidate_id rank score run_tag'");
        }
        double score = 0.0;
        const auto s = fields[4];
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(score)) {
            throw ParseError(std::string(source), line_no, "bad score '" + std::string(s) + "'");
        }

        std::string query_id(fields[0]);
        std::string candidate(fields[2]);
        if (!seen[query_id].insert(candidate).second) {
            if (diag) diag->warn("duplicate-run-item", query_id + " " + candidate);
            continue;
        }
        Ranking& ranking = run[query_id];
        ranking.query_id = query_id;
        ranking.items.push_back({std::move(candidate), score});
    }
    for (auto& [_, ranking] : run) sort_ranking(ranking);
    return run;
}

Run load_run(const std::filesystem::path& path, Diagnostics* diag) {
    return parse_run(read_file(path), diag, path.string());
}

}  // namespace docaware
