#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace textlab {

// Shortest decimal that round-trips to the same double (std::to_chars).
// All on-disk floats in the project go through these two functions.
std::string format_double(double v);
double parse_double(std::string_view s);  // throws Error(data) on junk

int64_t parse_int(std::string_view s);
uint64_t parse_uint(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
// Split on runs of whitespace, no empty fields.
std::vector<std::string_view> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);              // throws io
void write_file(const std::string& path, std::string_view);  // throws io

}  // namespace textlab
