#pragma once

#include <string>
#include <string_view>

namespace wxroute {

/// Timestamps throughout the library are hours since 1970-01-01T00:00:00Z.
using Hours = double;

/// Accepts YYYY-MM-DD, YYYY-MM-DDTHH:MM and YYYY-MM-DDTHH:MM:SS, optionally
/// suffixed with 'Z'; a space may replace the 'T'. UTC only.
Hours parse_iso8601(std::string_view text);

/// Formats to whole seconds as YYYY-MM-DDTHH:MM:SSZ.
std::string format_iso8601(Hours t);

} // namespace wxroute
