#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace docaware {

/// Whole-file read; throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file, then renames it over `path`.
/// Readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

/// Shortest decimal (never exponent) that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace docaware
