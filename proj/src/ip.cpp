#include "iotscan/ip.hpp"

#include <arpa/inet.h>

#include <cstring>

namespace iotscan {

std::string IpAddress::to_string() const {
    char buf[INET6_ADDRSTRLEN] = {};
    if (v6) {
        inet_ntop(AF_INET6, bytes.data(), buf, sizeof(buf));
    } else {
        inet_ntop(AF_INET, bytes.data(), buf, sizeof(buf));
    }
    return buf;
}

std::optional<IpAddress> IpAddress::parse(const std::string& literal) {
    IpAddress out;
    if (inet_pton(AF_INET, literal.c_str(), out.bytes.data()) == 1) {
        out.v6 = false;
        return out;
    }
    if (inet_pton(AF_INET6, literal.c_str(), out.bytes.data()) == 1) {
        out.v6 = true;
        return out;
    }
    return std::nullopt;
}

bool IpNetwork::contains(const IpAddress& addr) const {
    if (addr.v6 != base.v6) return false;
    for (int i = 0; i < prefix_len; ++i) {
        if (addr.bit(i) != base.bit(i)) return false;
    }
    return true;
}

std::optional<IpNetwork> IpNetwork::parse(const std::string& cidr) {
    std::string addr_part = cidr;
    int prefix = -1;
    if (auto slash = cidr.find('/'); slash != std::string::npos) {
        addr_part = cidr.substr(0, slash);
        const std::string len_part = cidr.substr(slash + 1);
        if (len_part.empty() || len_part.size() > 3) return std::nullopt;
        prefix = 0;
        for (char c : len_part) {
            if (c < '0' || c > '9') return std::nullopt;
            prefix = prefix * 10 + (c - '0');
        }
    }
    auto base = IpAddress::parse(addr_part);
    if (!base) return std::nullopt;
    if (prefix < 0) prefix = base->bit_length();
    if (prefix > base->bit_length()) return std::nullopt;
    return IpNetwork{*base, prefix};
}

}  // namespace iotscan
