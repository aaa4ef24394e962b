#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Small helpers shared by the line-oriented file formats.
namespace trade::text {

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Both throw std::invalid_argument with a short reason; callers wrap it into a
// ParseError carrying path and line number.
double parse_double(std::string_view field);
std::int64_t parse_int(std::string_view field);

/// Shortest representation that parses back to the identical double.
std::string format_double(double v);

/// Identifiers are written verbatim, so they must not break the record syntax.
void require_plain_identifier(std::string_view id, std::string_view what);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace trade::text
