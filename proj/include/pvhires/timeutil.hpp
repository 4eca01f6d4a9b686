#pragma once

// UTC instants. Accepted input: "YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|+hh:mm|-hh:mm]".
// Offsets are folded into UTC; fractional seconds are dropped.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "pvhires/error.hpp"

namespace pvhires {

using Timestamp = std::chrono::sys_seconds;

namespace detail {

inline int parse_digits(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
    int v = 0;
    if (pos + len > s.size()) throw DataError("malformed timestamp: '" + std::string(whole) + "'");
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || ptr != s.data() + pos + len) throw DataError("malformed timestamp: '" + std::string(whole) + "'");
    return v;
}

}  // namespace detail

inline Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
    auto bad = [&]() { return DataError("malformed timestamp: '" + std::string(text) + "'"); };
    if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') throw bad();

    const int y = detail::parse_digits(s, 0, 4, text);
    const int mo = detail::parse_digits(s, 5, 2, text);
    const int d = detail::parse_digits(s, 8, 2, text);
    const int hh = detail::parse_digits(s, 11, 2, text);
    const int mi = detail::parse_digits(s, 14, 2, text);
    int ss = 0;
    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        ss = detail::parse_digits(s, pos + 1, 2, text);
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        }
    }
    int offset_min = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            ++pos;
        } else if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6 && s[pos + 3] == ':') {
            const int sign = s[pos] == '+' ? 1 : -1;
            offset_min = sign * (detail::parse_digits(s, pos + 1, 2, text) * 60 + detail::parse_digits(s, pos + 4, 2, text));
            pos = s.size();
        } else {
            throw bad();
        }
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mi > 59 || ss > 60) throw bad();
    return sys_days{ymd} + hours{hh} + minutes{mi} + seconds{ss} - minutes{offset_min};
}

inline std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const hh_mm_ss hms{t - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return buf;
}

/// "YYYY-MM" of the UTC date.
inline std::string month_key(Timestamp t) {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()));
    return buf;
}

/// 1-based day of the UTC year.
inline int day_of_year(Timestamp t) {
    using namespace std::chrono;
    const auto d = floor<days>(t);
    const year_month_day ymd{d};
    const sys_days jan1{ymd.year() / January / 1};
    return static_cast<int>((d - jan1).count()) + 1;
}

/// Seconds since 1970-01-01T00:00:00Z.
inline double unix_seconds(Timestamp t) { return static_cast<double>(t.time_since_epoch().count()); }

}  // namespace pvhires
