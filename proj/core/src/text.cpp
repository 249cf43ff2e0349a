#include "wxroute/text.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "wxroute/error.hpp"

namespace wxroute::text {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view field, std::string_view context) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(Errc::FormatError,
                    std::string(context) + ": cannot parse '" + std::string(field) + "' as a number");
    }
    return value;
}

std::string_view trim(std::string_view s) noexcept {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        const auto pos = line.find(sep, begin);
        const auto piece = line.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin);
        out.emplace_back(trim(piece));
        if (pos == std::string_view::npos) break;
        begin = pos + 1;
    }
    return out;
}

} // namespace wxroute::text
