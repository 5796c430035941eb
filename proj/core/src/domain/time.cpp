/**
 * @file time.cpp
 * @brief ISO-8601 formatting without locale or time-zone database
 */

#include "rxtropic/domain/time.hpp"

#include <charconv>
#include <cstdio>

namespace rxtropic {

namespace {

using namespace std::chrono;

bool read_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
    return ec == std::errc{};
}

}  // namespace

std::string format_timestamp(Timestamp ts) {
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss<milliseconds> tod{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(tod.hours().count()),
                  static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()),
                  static_cast<int>(tod.subseconds().count()));
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS
    if (text.size() < 20 || text[10] != 'T' || text.back() != 'Z') {
        return std::nullopt;
    }
    auto date = parse_date(text.substr(0, 10));
    int hh = 0, mm = 0, ss = 0;
    if (!date || !read_int(text, 11, 2, hh) || text[13] != ':' || !read_int(text, 14, 2, mm) ||
        text[16] != ':' || !read_int(text, 17, 2, ss)) {
        return std::nullopt;
    }
    if (hh > 23 || mm > 59 || ss > 59) {
        return std::nullopt;
    }
    int millis = 0;
    std::string_view rest = text.substr(19, text.size() - 20);
    if (!rest.empty()) {
        if (rest[0] != '.' || rest.size() < 2 || rest.size() > 10) {
            return std::nullopt;
        }
        int frac = 0;
        const auto digits = rest.size() - 1;
        if (!read_int(rest, 1, digits, frac)) {
            return std::nullopt;
        }
        // Scale to milliseconds, truncating sub-millisecond digits.
        for (auto d = digits; d < 3; ++d) frac *= 10;
        for (auto d = digits; d > 3; --d) frac /= 10;
        millis = frac;
    }
    return Timestamp{sys_days{*date}} + hours{hh} + minutes{mm} + seconds{ss} +
           milliseconds{millis};
}

std::string format_date(Date date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
        !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
        return std::nullopt;
    }
    const Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        return std::nullopt;
    }
    return date;
}

Date to_date(Timestamp ts) { return Date{floor<days>(ts)}; }

Timestamp SystemClock::now() const {
    return time_point_cast<milliseconds>(system_clock::now());
}

ManualClock::ManualClock(Timestamp start) : millis_(start.time_since_epoch().count()) {}

Timestamp ManualClock::now() const { return Timestamp{milliseconds{millis_.load()}}; }

void ManualClock::set(Timestamp ts) { millis_.store(ts.time_since_epoch().count()); }

void ManualClock::advance(milliseconds delta) { millis_.fetch_add(delta.count()); }

}  // namespace rxtropic
