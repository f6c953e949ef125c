#include "iotscan/intake.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace iotscan {

std::optional<Protocol> infer_protocol(int port, std::optional<Protocol> explicit_protocol) {
    if (explicit_protocol) return explicit_protocol;
    switch (port) {
        case 1883:
        case 8883: return Protocol::Mqtt;
        case 5683:
        case 5684: return Protocol::Coap;
        case 5222:
        case 5269:
        case 5280:
        case 5298: return Protocol::Xmpp;
        default: return std::nullopt;
    }
}

std::vector<IpNetwork> load_exclusions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open exclusion list " + path);
    std::vector<IpNetwork> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        const std::string entry = line.substr(begin, end - begin + 1);
        auto net = IpNetwork::parse(entry);
        if (!net)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad CIDR '" +
                                     entry + "'");
        out.push_back(*net);
    }
    return out;
}

namespace {

bool is_excluded(const IpAddress& addr, const std::vector<IpNetwork>& exclusions) {
    return std::any_of(exclusions.begin(), exclusions.end(),
                       [&](const IpNetwork& n) { return n.contains(addr); });
}

std::optional<Protocol> parse_proto_tag(const std::string& tag) {
    if (tag.rfind("proto=", 0) != 0) return std::nullopt;
    return protocol_from_string(tag.substr(6));
}

int default_port_for(Protocol p) {
    switch (p) {
        case Protocol::Mqtt: return 1883;
        case Protocol::Coap: return 5683;
        case Protocol::Xmpp: return 5222;
    }
    return 0;
}

struct DedupKey {
    IpAddress address;
    std::uint16_t port;
    Protocol protocol;
    auto operator<=>(const DedupKey&) const = default;
};

void ingest(IntakeResult& result, std::set<DedupKey>& seen, Target target,
            const std::vector<IpNetwork>& exclusions) {
    if (is_excluded(target.address, exclusions)) {
        result.excluded.push_back(target.endpoint());
        return;
    }
    DedupKey key{target.address, target.port, target.protocol};
    if (!seen.insert(key).second) return;
    result.targets.push_back(std::move(target));
}

void load_plain(const std::string& path, IntakeResult& result, std::set<DedupKey>& seen,
                const std::vector<IpNetwork>& exclusions) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open target list " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string error;
        auto target = parse_plain_line(line, error);
        if (!target) {
            if (error == "unknown-port") {
                ++result.skipped_unknown_protocol;
                result.warnings.push_back(path + ":" + std::to_string(lineno) +
                                          ": non-default port without proto tag, skipped");
            } else {
                result.warnings.push_back(path + ":" + std::to_string(lineno) + ": " + error);
            }
            continue;
        }
        ingest(result, seen, std::move(*target), exclusions);
    }
}

// Shodan JSON-lines export; only ip_str, hostnames, port, and transport are read.
void load_shodan(const std::string& path, IntakeResult& result, std::set<DedupKey>& seen,
                 const std::vector<IpNetwork>& exclusions) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open shodan export " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.warnings.push_back(where + ": not a JSON object");
            continue;
        }
        if (!j.contains("ip_str") || !j.contains("port")) {
            result.warnings.push_back(where + ": missing ip_str or port");
            continue;
        }
        auto addr = IpAddress::parse(j["ip_str"].get<std::string>());
        if (!addr) {
            result.warnings.push_back(where + ": bad ip_str");
            continue;
        }
        const int port = j["port"].get<int>();
        if (port < 1 || port > 65535) {
            result.warnings.push_back(where + ": port out of range");
            continue;
        }
        std::optional<Protocol> explicit_proto;
        if (j.contains("transport") && j["transport"].is_string()) {
            // Shodan reports the L4 transport; udp on a CoAP port is the only
            // hint it gives us, so the port table still decides.
            const std::string transport = j["transport"].get<std::string>();
            if (transport != "tcp" && transport != "udp") {
                result.warnings.push_back(where + ": odd transport '" + transport + "'");
            }
        }
        auto proto = infer_protocol(port, explicit_proto);
        if (!proto) {
            ++result.skipped_unknown_protocol;
            result.warnings.push_back(where + ": non-default port, skipped");
            continue;
        }
        Target t;
        t.address = *addr;
        t.port = static_cast<std::uint16_t>(port);
        t.protocol = *proto;
        if (j.contains("hostnames") && j["hostnames"].is_array() && !j["hostnames"].empty() &&
            j["hostnames"][0].is_string())
            t.hostname = j["hostnames"][0].get<std::string>();
        ingest(result, seen, std::move(t), exclusions);
    }
}

}  // namespace

std::optional<Target> parse_plain_line(const std::string& raw, std::string& error) {
    std::string line = raw;
    const auto begin = line.find_first_not_of(" \t\r");
    const auto end = line.find_last_not_of(" \t\r");
    if (begin == std::string::npos) {
        error = "empty line";
        return std::nullopt;
    }
    line = line.substr(begin, end - begin + 1);

    std::optional<Protocol> explicit_proto;
    if (auto space = line.find_first_of(" \t"); space != std::string::npos) {
        const std::string tag_part = line.substr(line.find_first_not_of(" \t", space));
        line = line.substr(0, space);
        auto proto = parse_proto_tag(tag_part);
        if (!proto) {
            error = "bad tag '" + tag_part + "'";
            return std::nullopt;
        }
        explicit_proto = proto;
    }

    std::string addr_part = line;
    int port = 0;
    if (!line.empty() && line.front() == '[') {
        // [v6]:port
        const auto close = line.find(']');
        if (close == std::string::npos) {
            error = "unterminated '['";
            return std::nullopt;
        }
        addr_part = line.substr(1, close - 1);
        if (close + 1 < line.size()) {
            if (line[close + 1] != ':') {
                error = "expected ':' after ']'";
                return std::nullopt;
            }
            port = std::atoi(line.c_str() + close + 2);
        }
    } else {
        const auto colons = std::count(line.begin(), line.end(), ':');
        if (colons == 1) {
            const auto colon = line.find(':');
            addr_part = line.substr(0, colon);
            port = std::atoi(line.c_str() + colon + 1);
        } else if (colons > 1) {
            addr_part = line;  // bare IPv6
        }
    }

    auto addr = IpAddress::parse(addr_part);
    if (!addr) {
        error = "not an IP literal: '" + addr_part + "'";
        return std::nullopt;
    }
    if (port == 0 && explicit_proto) port = default_port_for(*explicit_proto);
    if (port < 1 || port > 65535) {
        if (port == 0)
            error = "missing port";
        else
            error = "port out of range";
        return std::nullopt;
    }
    auto proto = infer_protocol(port, explicit_proto);
    if (!proto) {
        error = "unknown-port";
        return std::nullopt;
    }
    Target t;
    t.address = *addr;
    t.port = static_cast<std::uint16_t>(port);
    t.protocol = *proto;
    return t;
}

IntakeResult load_targets(const IntakeSource& source, const std::vector<IpNetwork>& exclusions) {
    IntakeResult result;
    std::set<DedupKey> seen;
    if (source.kind == IntakeKind::PlainList)
        load_plain(source.path, result, seen, exclusions);
    else
        load_shodan(source.path, result, seen, exclusions);
    return result;
}

}  // namespace iotscan
