#pragma once

// Small string and file helpers shared by the line-oriented parsers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rosetta::text {

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits into lines, dropping a UTF-8 BOM and trailing '\r'.
std::vector<std::string> lines(std::string_view content);

// Whole file as bytes; throws std::runtime_error if unreadable.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Lowercase ASCII slug: runs of non-alphanumerics collapse to '-'.
std::string slugify(std::string_view s);

// Strict decimal integer parse of the whole token.
bool parse_int(std::string_view s, int& out);
bool parse_double(std::string_view s, double& out);

// RFC 4180 quoting when the field contains ',', '"' or a newline.
std::string csv_field(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);

// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

}  // namespace rosetta::text
