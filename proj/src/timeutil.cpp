#include "depdyn/timeutil.hpp"

#include <cstdio>

namespace depdyn {

namespace {

// Days-from-civil / civil-from-days per Howard Hinnant's branchless
// calendar algorithms; valid far beyond any plausible tweet timestamp.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static const int dm[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return dm[m - 1];
}

bool valid_date(int y, int m, int d) {
    return m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

}  // namespace

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::string Date::month_key() const {
    char buf[12];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

std::int64_t Date::day_number() const {
    return days_from_civil(year, month, day);
}

Date Date::from_day_number(std::int64_t days) {
    Date d;
    civil_from_days(days, d.year, d.month, d.day);
    return d;
}

std::optional<Date> Date::parse(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3) return std::nullopt;
    if (s.size() != 10 || !valid_date(y, m, d)) return std::nullopt;
    return Date{y, m, d};
}

Date UtcTime::date() const {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds < 0 && epoch_seconds % 86400 != 0) --days;
    return Date::from_day_number(days);
}

std::string UtcTime::to_iso8601() const {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t sod = epoch_seconds % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    const Date d = Date::from_day_number(days);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02lld:%02lld:%02lldZ", d.year, d.month,
                  d.day, static_cast<long long>(sod / 3600),
                  static_cast<long long>((sod / 60) % 60), static_cast<long long>(sod % 60));
    return buf;
}

std::optional<UtcTime> UtcTime::parse_iso8601(const std::string& s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &sec,
                    &consumed) != 6) {
        return std::nullopt;
    }
    const std::string zone = s.substr(static_cast<std::size_t>(consumed));
    if (zone != "Z" && zone != "+00:00") return std::nullopt;
    if (!valid_date(y, mo, d) || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) {
        return std::nullopt;
    }
    if (sec == 60) sec = 59;  // fold leap seconds
    const std::int64_t days = days_from_civil(y, mo, d);
    return UtcTime{days * 86400 + h * 3600 + mi * 60 + sec};
}

std::optional<std::pair<int, int>> parse_month_key(const std::string& s) {
    int y = 0, m = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d%c", &y, &m, &tail) != 2) return std::nullopt;
    if (s.size() != 7 || m < 1 || m > 12) return std::nullopt;
    return std::make_pair(y, m);
}

}  // namespace depdyn
