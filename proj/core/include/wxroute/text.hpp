#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the CSV readers and writers.

namespace wxroute::text {

/// Shortest decimal that round-trips to the same double ("nan", "inf" and
/// "-inf" for non-finite values).
std::string format_double(double value);

/// Parses a whole field as a double; throws FormatError naming `context`.
double parse_double(std::string_view field, std::string_view context);

std::string_view trim(std::string_view s) noexcept;

/// Splits on `sep` and trims each field. Does not handle quoting.
std::vector<std::string> split(std::string_view line, char sep = ',');

} // namespace wxroute::text
