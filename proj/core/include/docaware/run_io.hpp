#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "docaware/diagnostics.hpp"
#include "docaware/ranking.hpp"

namespace docaware {

/// TREC run format, one line per item:
///   query_id Q0 candidate_id rank score run_tag
/// Ranks are 1-based. Scores use the shortest fixed-point decimal that
/// parses back to the same double, so a written run re-loads exactly.
std::string format_run(const Run& run, std::string_view run_tag);
void write_run(const Run& run, const std::filesystem::path& path, std::string_view run_tag);

/// Parses a TREC run. Items are re-sorted into ranking order; the rank column
/// is ignored. A repeated (query, candidate) keeps the first line and is
/// counted under "duplicate-run-item".
Run parse_run(std::string_view text, Diagnostics* diag = nullptr, std::string_view source = "<run>");
Run load_run(const std::filesystem::path& path, Diagnostics* diag = nullptr);

}  // namespace docaware
