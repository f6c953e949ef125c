#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iotscan/model.hpp"

namespace iotscan {

// Dotted numeric version; a trailing non-numeric suffix is kept for display but
// ignored for ordering ("1.4.15a" orders as 1.4.15).
struct Version {
    std::vector<int> components;
    std::string raw;
    std::string suffix;

    static std::optional<Version> parse(const std::string& text);
    friend bool operator==(const Version& a, const Version& b) {
        return compare_versions(a, b) == std::strong_ordering::equal;
    }
    friend std::strong_ordering compare_versions(const Version& a, const Version& b);
};

enum class RuleKind { VersionRange, Fingerprint };

struct VersionRangeRule {
    std::vector<std::string> vuln_ids;  // one finding per id
    std::string software;               // matched case-insensitively
    std::optional<Version> min_inclusive;
    std::optional<Version> max_inclusive;
    std::optional<Version> max_exclusive;
    ThreatClass threat_class = ThreatClass::DenialOfService;
    Severity severity = Severity::High;
    Protocol applies_to = Protocol::Mqtt;
    RuleKind kind = RuleKind::VersionRange;

    bool contains(const Version& v) const;
};

enum class FlagRule { AfGreaterThan100, ResponseContains };

struct ProbeMatchSignature {
    std::string signature_id;
    Protocol applies_to = Protocol::Coap;
    std::vector<std::uint8_t> request_bytes;  // frame-valid benign request
    FlagRule flag_rule = FlagRule::AfGreaterThan100;
    std::vector<std::uint8_t> match_pattern;  // used by ResponseContains
    ThreatClass threat_class = ThreatClass::DenialOfService;
    Severity severity = Severity::Medium;
};

// Server-identification pattern for CoAP fingerprinting (banner or diagnostic text).
struct CoapFingerprintPattern {
    std::string software;
    std::string match_substring;
    std::string version_regex;  // optional; first capture group is the version
};

struct KnowledgeBase {
    std::vector<VersionRangeRule> version_rules;  // includes kind=Fingerprint rules
    std::vector<ProbeMatchSignature> signatures;
    std::vector<CoapFingerprintPattern> fingerprints;
    std::vector<std::string> warnings;

    std::size_t rule_count() const { return version_rules.size() + signatures.size(); }
};

// Emits one Finding per rule id whose software matches and whose range contains
// the version. Pure; no network access.
std::vector<Finding> match_version_rules(const SoftwareId& software,
                                         const std::vector<VersionRangeRule>& rules,
                                         const std::string& detector);

// Matches banner/diagnostic texts against the KB's fingerprint patterns.
std::optional<SoftwareId> match_coap_fingerprint(const std::vector<std::string>& texts,
                                                 const KnowledgeBase& kb);

// Throws std::runtime_error naming the offending entry on schema violations.
KnowledgeBase load_kb(const std::string& path);
KnowledgeBase parse_kb(const std::string& content, const std::string& origin);

// The built-in rule set; identical to data/default.kb.
const KnowledgeBase& default_kb();

}  // namespace iotscan
