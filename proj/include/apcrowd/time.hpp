#pragma once

// Wall-clock timestamps at second resolution. Logs carry local building time with no zone,
// so sys_seconds is used purely as a civil-time counter.

#include <apcrowd/error.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace apcrowd {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

// Seconds elapsed since midnight.
using TimeOfDay = std::chrono::seconds;

namespace detail {

inline std::optional<int> parse_fixed_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

inline std::optional<Date> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = detail::parse_fixed_int(s.substr(0, 4));
    auto m = detail::parse_fixed_int(s.substr(5, 2));
    auto d = detail::parse_fixed_int(s.substr(8, 2));
    if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1) return std::nullopt;
    Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
              std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

// Accepts `HH:MM` or `HH:MM:SS`.
inline std::optional<TimeOfDay> parse_time_of_day(std::string_view s) {
    if (s.size() != 5 && s.size() != 8) return std::nullopt;
    if (s[2] != ':' || (s.size() == 8 && s[5] != ':')) return std::nullopt;
    auto h = detail::parse_fixed_int(s.substr(0, 2));
    auto m = detail::parse_fixed_int(s.substr(3, 2));
    std::optional<int> sec = 0;
    if (s.size() == 8) sec = detail::parse_fixed_int(s.substr(6, 2));
    if (!h || !m || !sec) return std::nullopt;
    if (*h < 0 || *h > 23 || *m < 0 || *m > 59 || *sec < 0 || *sec > 59) return std::nullopt;
    return TimeOfDay{*h * 3600 + *m * 60 + *sec};
}

// Accepts `YYYY-MM-DD HH:MM:SS` (log format) and `YYYY-MM-DDTHH:MM:SS` (ISO).
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    if (s.size() != 19 || (s[10] != ' ' && s[10] != 'T')) return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    auto tod = parse_time_of_day(s.substr(11));
    if (!date || !tod) return std::nullopt;
    return Timestamp{std::chrono::sys_days{*date}} + *tod;
}

inline Timestamp make_timestamp(Date date, TimeOfDay tod) {
    return Timestamp{std::chrono::sys_days{date}} + tod;
}

inline Date date_of(Timestamp t) {
    return Date{std::chrono::floor<std::chrono::days>(t)};
}

inline TimeOfDay time_of_day(Timestamp t) {
    return t - std::chrono::floor<std::chrono::days>(t);
}

inline std::chrono::weekday weekday_of(Timestamp t) {
    return std::chrono::weekday{std::chrono::floor<std::chrono::days>(t)};
}

inline Timestamp floor_minute(Timestamp t) {
    return std::chrono::floor<std::chrono::minutes>(t);
}

inline std::string format_date(Date d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

inline std::string format_time_of_day(TimeOfDay tod, bool with_seconds = true) {
    const auto s = tod.count();
    char buf[64];
    if (with_seconds)
        std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                      static_cast<long long>((s / 60) % 60), static_cast<long long>(s % 60));
    else
        std::snprintf(buf, sizeof buf, "%02lld:%02lld", static_cast<long long>(s / 3600),
                      static_cast<long long>((s / 60) % 60));
    return buf;
}

// `YYYY-MM-DD HH:MM:SS`, or with a `T` separator when iso is set.
inline std::string format_timestamp(Timestamp t, bool iso = false) {
    return format_date(date_of(t)) + (iso ? 'T' : ' ') + format_time_of_day(time_of_day(t));
}

inline std::optional<std::chrono::weekday> parse_weekday(std::string_view s) {
    static constexpr std::string_view names[] = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};
    if (s.size() < 3) return std::nullopt;
    std::string lower;
    for (char c : s.substr(0, 3)) lower.push_back(static_cast<char>(c | 0x20));
    for (unsigned i = 0; i < 7; ++i)
        if (lower == names[i]) return std::chrono::weekday{i};
    return std::nullopt;
}

inline std::string weekday_name(std::chrono::weekday wd) {
    static constexpr const char* names[] = {"Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};
    return names[wd.c_encoding()];
}

}  // namespace apcrowd
