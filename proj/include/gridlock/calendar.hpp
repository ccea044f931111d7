#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>

#include "gridlock/errors.hpp"

namespace gridlock {

/// Calendar date (no time zone; inputs are assumed already local time).
struct Date {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;
};

namespace detail {
inline std::chrono::sys_days to_sys_days(const Date& d) {
    return std::chrono::sys_days{std::chrono::year{d.year} / static_cast<int>(d.month) /
                                 static_cast<int>(d.day)};
}
}  // namespace detail

/// ISO weekday index, Monday = 0 .. Sunday = 6.
inline int weekday_index(const Date& d) {
    const std::chrono::weekday wd{detail::to_sys_days(d)};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

inline const char* weekday_name(const Date& d) {
    static const char* names[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    return names[weekday_index(d)];
}

inline bool is_valid(const Date& d) {
    return (std::chrono::year{d.year} / static_cast<int>(d.month) / static_cast<int>(d.day)).ok();
}

inline Date add_days(const Date& d, int n) {
    const std::chrono::year_month_day ymd{detail::to_sys_days(d) + std::chrono::days{n}};
    return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day())};
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", d.year, d.month, d.day);
    return buf;
}

/// Parses "YYYY-MM-DD".
inline Date parse_date(const std::string& s) {
    int y = 0;
    unsigned m = 0, day = 0;
    if (std::sscanf(s.c_str(), "%4d-%2u-%2u", &y, &m, &day) != 3)
        throw DataError("invalid date: '" + s + "'");
    Date d{y, m, day};
    if (!is_valid(d)) throw DataError("invalid date: '" + s + "'");
    return d;
}

/// Time-of-day as minutes after midnight, 0..1439 (1440 = end of day marker).
struct Timestamp {
    Date date;
    int minute_of_day = 0;
};

/// Parses "YYYY-MM-DDTHH:MM[:SS]" ('T' or space separator). Seconds, if
/// present, must be zero: data is interval-aligned.
inline Timestamp parse_timestamp(const std::string& s) {
    if (s.size() < 16) throw DataError("invalid timestamp: '" + s + "'");
    const char sep = s[10];
    if (sep != 'T' && sep != ' ') throw DataError("invalid timestamp: '" + s + "'");
    Timestamp ts;
    ts.date = parse_date(s.substr(0, 10));
    int hh = 0, mm = 0, ss = 0;
    const std::string tod = s.substr(11);
    const int n = std::sscanf(tod.c_str(), "%2d:%2d:%2d", &hh, &mm, &ss);
    if (n < 2 || hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss != 0)
        throw DataError("invalid timestamp: '" + s + "'");
    ts.minute_of_day = hh * 60 + mm;
    return ts;
}

inline std::string format_timestamp(const Timestamp& ts) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%sT%02d:%02d", format_date(ts.date).c_str(),
                  ts.minute_of_day / 60, ts.minute_of_day % 60);
    return buf;
}

}  // namespace gridlock
