#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prosody {

// Shortest decimal representation that round-trips the exact double.
// Stable across runs, so files built from the same inputs are byte-identical.
std::string fmt_double(double value);

std::vector<std::string> split_fields(std::string_view line);  // by whitespace
std::vector<std::string> split_on(std::string_view text, char sep);

std::optional<std::int64_t> parse_int64(std::string_view text);
std::optional<double> parse_double(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace prosody
