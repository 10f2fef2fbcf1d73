#ifndef DEPDYN_TIMEUTIL_HPP
#define DEPDYN_TIMEUTIL_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace depdyn {

// UTC calendar day.
struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    auto operator<=>(const Date&) const = default;

    std::string to_string() const;        // YYYY-MM-DD
    std::string month_key() const;        // YYYY-MM
    std::int64_t day_number() const;      // days since 1970-01-01
    static Date from_day_number(std::int64_t days);
    static std::optional<Date> parse(const std::string& s);  // YYYY-MM-DD
};

// UTC timestamp at second resolution.
struct UtcTime {
    std::int64_t epoch_seconds = 0;

    auto operator<=>(const UtcTime&) const = default;

    Date date() const;
    std::string to_iso8601() const;  // YYYY-MM-DDTHH:MM:SSZ
    // Accepts YYYY-MM-DDTHH:MM:SS followed by "Z" or "+00:00".
    static std::optional<UtcTime> parse_iso8601(const std::string& s);
};

// YYYY-MM month key; empty optional when malformed.
std::optional<std::pair<int, int>> parse_month_key(const std::string& s);

}  // namespace depdyn

#endif
