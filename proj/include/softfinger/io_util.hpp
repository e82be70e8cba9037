#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace softfinger {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict double parse of the whole token; throws std::invalid_argument.
double parse_double(std::string_view token, std::string_view context);

std::vector<std::string_view> split_csv_line(std::string_view line);

/// Writes via a sibling temp file + rename so readers never observe a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace softfinger
