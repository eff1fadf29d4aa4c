#pragma once

// Small text helpers shared by the CSV, tape7 and manifest readers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace uasrad::text {

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming each field. Empty fields are kept.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits on runs of spaces/tabs.
std::vector<std::string_view> split_ws(std::string_view s);

/// Parses a whole field as a double; throws FormatError naming `line` otherwise.
double parse_double(std::string_view field, std::size_t line = 0);

bool is_number(std::string_view field);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

std::string to_lower(std::string_view s);

}  // namespace uasrad::text
