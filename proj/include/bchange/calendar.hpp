// UTC calendar arithmetic on epoch seconds. No timezone, no locale.
#pragma once

#include <cstdint>

namespace bchange::cal {

constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDate {
    int year;
    unsigned month;  // 1..12
    unsigned day;    // 1..31
};

// Days since 1970-01-01 for a proleptic Gregorian date.
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    return a / b - ((a % b != 0) && ((a % b < 0) != (b < 0)));
}

constexpr std::int64_t days_from_epoch_seconds(std::int64_t ts) {
    return floor_div(ts, kSecondsPerDay);
}

// 0 = Monday .. 6 = Sunday. 1970-01-01 (day 0) was a Thursday.
constexpr int weekday_from_days(std::int64_t days) {
    std::int64_t r = (days + 3) % 7;
    if (r < 0) r += 7;
    return static_cast<int>(r);
}

// Monday-aligned week index. Two timestamps share an ISO-8601 calendar week
// iff this key is equal, since ISO weeks run Monday..Sunday.
constexpr std::int64_t iso_week_key(std::int64_t ts) {
    const std::int64_t days = days_from_epoch_seconds(ts);
    return days - weekday_from_days(days);
}

constexpr int year_of(std::int64_t ts) {
    return civil_from_days(days_from_epoch_seconds(ts)).year;
}

// First second of the year following the one containing `ts`, i.e. the
// exclusive end of that calendar year.
constexpr std::int64_t end_of_year(std::int64_t ts) {
    return days_from_civil(year_of(ts) + 1, 1, 1) * kSecondsPerDay;
}

constexpr std::int64_t start_of_day(std::int64_t ts) {
    return days_from_epoch_seconds(ts) * kSecondsPerDay;
}

}  // namespace bchange::cal
