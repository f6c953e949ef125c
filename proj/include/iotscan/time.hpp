#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace iotscan {

// UTC instant with millisecond precision. Records carry these so that
// two scans of the same target diff deterministically.
struct UtcTime {
    std::int64_t ms_since_epoch = 0;

    friend bool operator==(const UtcTime&, const UtcTime&) = default;
    friend auto operator<=>(const UtcTime&, const UtcTime&) = default;

    UtcTime plus_ms(std::int64_t delta) const { return UtcTime{ms_since_epoch + delta}; }
    UtcTime plus_seconds(std::int64_t s) const { return plus_ms(s * 1000); }
    UtcTime plus_days(std::int64_t d) const { return plus_seconds(d * 86400); }
};

UtcTime utc_now();

// RFC 3339 with exactly three fractional digits, e.g. "2022-08-09T12:34:56.789Z".
std::string format_rfc3339_ms(UtcTime t);

// Accepts 'Z' or '+00:00' suffixes and 0-9 fractional digits (truncated to ms).
std::optional<UtcTime> parse_rfc3339(const std::string& text);

}  // namespace iotscan
