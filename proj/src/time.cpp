#include "iotscan/time.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>

namespace iotscan {

UtcTime utc_now() {
    using namespace std::chrono;
    return UtcTime{duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count()};
}

namespace {

// Civil-date conversion that works for years far outside time_t's comfort zone
// (certificates in the wild carry not-after dates centuries away).
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const int yoe = static_cast<int>(y - era * 400);
    const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const int doe = static_cast<int>(z - era * 146097);
    const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = yoe + era * 400;
    const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::string format_rfc3339_ms(UtcTime t) {
    std::int64_t days = floor_div(t.ms_since_epoch, 86400000);
    std::int64_t rem = t.ms_since_epoch - days * 86400000;
    std::int64_t y;
    int mo, d;
    civil_from_days(days, y, mo, d);
    int h = static_cast<int>(rem / 3600000);
    rem %= 3600000;
    int mi = static_cast<int>(rem / 60000);
    rem %= 60000;
    int s = static_cast<int>(rem / 1000);
    int ms = static_cast<int>(rem % 1000);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04" PRId64 "-%02d-%02dT%02d:%02d:%02d.%03dZ", y, mo, d, h, mi,
                  s, ms);
    return buf;
}

std::optional<UtcTime> parse_rfc3339(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s,
                    &consumed) != 6)
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) return std::nullopt;
    std::size_t pos = static_cast<std::size_t>(consumed);
    std::int64_t ms = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits < 3) ms = ms * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0) return std::nullopt;
        while (digits < 3) {
            ms *= 10;
            ++digits;
        }
    }
    std::int64_t offset_ms = 0;
    if (pos >= text.size()) return std::nullopt;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        int oh = 0, om = 0;
        if (std::sscanf(text.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2) return std::nullopt;
        offset_ms = (oh * 3600LL + om * 60LL) * 1000;
        if (text[pos] == '+') offset_ms = -offset_ms;
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;
    std::int64_t total = days_from_civil(y, mo, d) * 86400000LL +
                         (h * 3600LL + mi * 60LL + s) * 1000 + ms + offset_ms;
    return UtcTime{total};
}

}  // namespace iotscan
