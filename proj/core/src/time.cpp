#include "wxroute/time.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "wxroute/error.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

int parse_fixed(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
    if (pos + len > s.size()) throw Error(Errc::FormatError, "truncated timestamp '" + std::string(whole) + "'");
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') throw Error(Errc::FormatError, "bad digit in timestamp '" + std::string(whole) + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

void expect(std::string_view s, std::size_t pos, char c, std::string_view whole) {
    if (pos >= s.size() || s[pos] != c) {
        throw Error(Errc::FormatError, "malformed timestamp '" + std::string(whole) + "'");
    }
}

} // namespace

Hours parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    std::string_view s = text::trim(text);
    if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);

    const int y = parse_fixed(s, 0, 4, text);
    expect(s, 4, '-', text);
    const int mo = parse_fixed(s, 5, 2, text);
    expect(s, 7, '-', text);
    const int d = parse_fixed(s, 8, 2, text);
    int hh = 0, mm = 0, ss = 0;
    if (s.size() > 10) {
        if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') {
            throw Error(Errc::FormatError, "malformed timestamp '" + std::string(text) + "'");
        }
        hh = parse_fixed(s, 11, 2, text);
        expect(s, 13, ':', text);
        mm = parse_fixed(s, 14, 2, text);
        if (s.size() > 16) {
            expect(s, 16, ':', text);
            ss = parse_fixed(s, 17, 2, text);
            if (s.size() != 19) throw Error(Errc::FormatError, "trailing characters in timestamp '" + std::string(text) + "'");
        }
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
        throw Error(Errc::FormatError, "out-of-range field in timestamp '" + std::string(text) + "'");
    }
    const auto secs = sys_days{ymd}.time_since_epoch() + hours{hh} + minutes{mm} + seconds{ss};
    return static_cast<double>(duration_cast<seconds>(secs).count()) / 3600.0;
}

std::string format_iso8601(Hours t) {
    using namespace std::chrono;
    if (!std::isfinite(t)) throw Error(Errc::InvalidArgument, "cannot format non-finite timestamp");
    const auto total = seconds{std::llround(t * 3600.0)};
    const auto day_point = floor<days>(sys_seconds{total});
    const year_month_day ymd{day_point};
    const hh_mm_ss tod{sys_seconds{total} - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

} // namespace wxroute
