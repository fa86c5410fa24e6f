#ifndef CMMPATH_IO_UTIL_HPP
#define CMMPATH_IO_UTIL_HPP

#include <string>
#include <string_view>
#include <vector>

namespace cmmpath {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

// Strict locale-free double parse of a full (trimmed) field.
bool parse_double(std::string_view field, double& out);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::string& path);

void write_file(const std::string& path, std::string_view content);

}  // namespace cmmpath

#endif
