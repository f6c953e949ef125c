#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace iotscan {

// IPv4 or IPv6 literal. v4 addresses keep their 4 bytes in bytes[0..3].
struct IpAddress {
    std::array<std::uint8_t, 16> bytes{};
    bool v6 = false;

    friend bool operator==(const IpAddress&, const IpAddress&) = default;
    friend auto operator<=>(const IpAddress&, const IpAddress&) = default;

    int bit_length() const { return v6 ? 128 : 32; }
    bool bit(int i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1; }

    std::string to_string() const;
    static std::optional<IpAddress> parse(const std::string& literal);
};

struct IpNetwork {
    IpAddress base;
    int prefix_len = 0;

    bool contains(const IpAddress& addr) const;
    // "10.0.0.0/8" or "2001:db8::/32"; a bare address means a full-length prefix.
    static std::optional<IpNetwork> parse(const std::string& cidr);
};

}  // namespace iotscan
