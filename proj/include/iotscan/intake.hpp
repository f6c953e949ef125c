#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iotscan/model.hpp"

namespace iotscan {

enum class IntakeKind { PlainList, ShodanExport };

struct IntakeSource {
    IntakeKind kind = IntakeKind::PlainList;
    std::string path;
};

struct IntakeResult {
    std::vector<Target> targets;              // deduplicated, input order preserved
    std::vector<std::string> warnings;        // per-entry parse problems, with line numbers
    std::vector<std::string> excluded;        // endpoints dropped by the exclusion list
    std::size_t skipped_unknown_protocol = 0;
};

// Default-port table: 1883/8883 MQTT, 5683/5684 CoAP, 5222/5269/5280/5298 XMPP.
// An explicit tag wins; unknown ports without a tag yield nullopt.
std::optional<Protocol> infer_protocol(int port, std::optional<Protocol> explicit_protocol);

// Exclusion list: one IP or CIDR per line, '#' comments.
std::vector<IpNetwork> load_exclusions(const std::string& path);

// Throws std::runtime_error when the source file is unreadable; malformed
// entries become warnings instead.
IntakeResult load_targets(const IntakeSource& source,
                          const std::vector<IpNetwork>& exclusions = {});

// One "address[:port][ proto=mqtt|coap|xmpp]" line; exposed for tests.
std::optional<Target> parse_plain_line(const std::string& line, std::string& error);

}  // namespace iotscan
