#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "iotscan/ip.hpp"
#include "iotscan/time.hpp"

namespace iotscan {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::int64_t kDefaultDeadlineSeconds = 60;
inline constexpr std::size_t kSysPayloadCap = 4096;
inline constexpr std::size_t kWellKnownPayloadCap = 8192;

enum class Protocol { Mqtt, Coap, Xmpp };
enum class ThreatClass { InformationLeakage, WeakAuthentication, DenialOfService };
enum class Severity { Info, Low, Medium, High };

std::string to_string(Protocol p);
std::string to_string(ThreatClass c);
std::string to_string(Severity s);
std::optional<Protocol> protocol_from_string(const std::string& s);
std::optional<ThreatClass> threat_class_from_string(const std::string& s);
std::optional<Severity> severity_from_string(const std::string& s);

struct Target {
    IpAddress address;
    std::optional<std::string> hostname;
    std::uint16_t port = 0;
    Protocol protocol = Protocol::Mqtt;

    friend bool operator==(const Target&, const Target&) = default;
    friend auto operator<=>(const Target&, const Target&) = default;

    std::string endpoint() const;  // "203.0.113.5:1883"
};

struct SoftwareId {
    std::string name;
    std::string version;  // raw string; may be "unknown"

    friend bool operator==(const SoftwareId&, const SoftwareId&) = default;
};

// Evidence entries are flat "key=value" strings so redaction stays greppable.
struct Finding {
    ThreatClass threat_class = ThreatClass::InformationLeakage;
    std::string vuln_id;
    std::vector<std::string> evidence;
    Severity severity = Severity::Info;
    std::string detector;

    friend bool operator==(const Finding&, const Finding&) = default;
};

// ---- MQTT ----

enum class MqttVersion { V311, V5 };

struct MqttConnectOutcome {
    // CONNACK return code 0-5 mapped to the v3.1.1 taxonomy; nullopt = network error.
    std::optional<int> code;
    MqttVersion protocol_version_used = MqttVersion::V311;
    bool retried_v5 = false;
    std::optional<int> first_attempt_code;   // set when retried_v5
    std::optional<int> raw_v5_reason_code;   // untranslated v5 reason, when v5 was used

    friend bool operator==(const MqttConnectOutcome&, const MqttConnectOutcome&) = default;
};

struct MqttObservation {
    MqttConnectOutcome outcome;
    std::map<std::string, std::uint64_t> topics;       // topic -> message count
    std::map<std::string, std::string> sys_payloads;   // "$SYS/..." only, truncated
    std::optional<SoftwareId> broker_software;
    std::optional<std::uint64_t> connected_clients;
    double listen_seconds = 0.0;
    std::vector<std::string> denied_subscriptions;     // wildcard filters the broker refused

    friend bool operator==(const MqttObservation&, const MqttObservation&) = default;
};

// ---- CoAP ----

struct CoapCode {
    int cls = 0;     // 0,2,4,5
    int detail = 0;  // .dd

    friend bool operator==(const CoapCode&, const CoapCode&) = default;
    friend auto operator<=>(const CoapCode&, const CoapCode&) = default;
    std::string to_string() const;  // "2.05"
};

enum class ResourceStatus { Available, Unauthorized, NotFound, MethodNotAllowed, Other, Timeout };

std::string to_string(ResourceStatus s);
std::optional<ResourceStatus> resource_status_from_string(const std::string& s);

struct ResourceProbeResult {
    std::string resource;
    ResourceStatus status = ResourceStatus::Timeout;
    std::optional<CoapCode> response_code;
    // Diagnostic text of 4.xx/5.xx responses only (RFC 7252 5.5.2); never resource content.
    std::optional<std::string> diagnostic;

    friend bool operator==(const ResourceProbeResult&, const ResourceProbeResult&) = default;
};

// Maps a response code onto the probe's status taxonomy.
ResourceStatus classify_coap_code(CoapCode code);

struct AmplificationMeasurement {
    std::string signature_id;
    std::uint32_t request_bytes = 0;
    std::uint32_t response_bytes = 0;

    // 100 * response / request, exact in hundredths of a percent.
    std::int64_t af_percent_x100() const;
    std::string af_percent_2dp() const;  // "849.06"
    bool flagged() const;                // strictly > 100 %

    friend bool operator==(const AmplificationMeasurement&, const AmplificationMeasurement&) =
        default;
};

struct CoapObservation {
    std::vector<ResourceProbeResult> resources;
    std::optional<std::string> well_known_payload;  // link-format body, capped
    std::optional<SoftwareId> software;
    std::vector<AmplificationMeasurement> amplification;

    friend bool operator==(const CoapObservation&, const CoapObservation&) = default;
};

// ---- XMPP ----

enum class Starttls { NotOffered, Offered, Required };
enum class OpenRegistration { NotOffered, PasswordRequired, OpenWithoutPassword };

std::string to_string(Starttls s);
std::string to_string(OpenRegistration r);

struct XmppObservation {
    std::optional<SoftwareId> server_software;
    std::set<std::string> sasl_mechanisms;
    Starttls starttls = Starttls::NotOffered;
    std::set<std::string> features;  // feature namespace URIs
    OpenRegistration open_registration = OpenRegistration::NotOffered;
    std::optional<std::string> language;
    std::optional<bool> registration_cleanup_ok;  // set only when a dummy account was created
    std::optional<std::string> parse_error_head;  // first bytes when the stream was not XML

    friend bool operator==(const XmppObservation&, const XmppObservation&) = default;
};

// ---- TLS ----

enum class TlsVersion { Tls1_0, Tls1_1, Tls1_2, Tls1_3 };

std::string to_string(TlsVersion v);
std::optional<TlsVersion> tls_version_from_string(const std::string& s);

struct CertInfo {
    std::string subject_cn;
    std::vector<std::string> san_dns_names;
    UtcTime not_before;
    UtcTime not_after;
    std::string serial;  // uppercase hex

    friend bool operator==(const CertInfo&, const CertInfo&) = default;
};

struct TlsCapabilityMatrix {
    std::set<TlsVersion> versions_supported;
    std::map<TlsVersion, std::vector<std::string>> ciphers_by_version;  // IANA names
    std::optional<int> dh_prime_bits;
    std::optional<CertInfo> certificate;

    friend bool operator==(const TlsCapabilityMatrix&, const TlsCapabilityMatrix&) = default;
};

struct TlsObservation {
    bool tls_supported = false;
    std::optional<TlsCapabilityMatrix> matrix;
    std::vector<Finding> findings;

    friend bool operator==(const TlsObservation&, const TlsObservation&) = default;
};

// ---- Augmentation ----

enum class Provider {
    Aws,
    Google,
    Azure,
    Alibaba,
    Oracle,
    Cloudflare,
    Ibm,
    DigitalOcean,
    Yandex,
    Salesforce,
    Other
};

std::string to_string(Provider p);
std::optional<Provider> provider_from_string(const std::string& s);

struct AugmentInfo {
    std::string country = "??";  // ISO 3166-1 alpha-2 or "??"
    Provider provider = Provider::Other;
    bool managed_aws = false;

    friend bool operator==(const AugmentInfo&, const AugmentInfo&) = default;
};

// ---- Record ----

using Observation = std::variant<MqttObservation, CoapObservation, XmppObservation>;

struct ScanRecord {
    Target target;
    std::string scan_id;
    UtcTime started_at;
    UtcTime ended_at;
    bool reachable = false;
    std::optional<Observation> observation;
    std::optional<TlsObservation> tls;
    std::optional<AugmentInfo> augment;
    std::vector<Finding> findings;
    int schema_version = kSchemaVersion;

    friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

// Probe findings plus TLS findings, in stored order.
std::vector<Finding> all_findings(const ScanRecord& record);

// Empty iff every type invariant holds; each entry names the field and the
// invariant breached. Total, side-effect free.
std::vector<std::string> validate_record(const ScanRecord& record,
                                         std::int64_t deadline_seconds = kDefaultDeadlineSeconds);

// One-line canonical JSON (sorted keys); newline not included.
std::string encode_record(const ScanRecord& record);
// Throws std::runtime_error on malformed input or unknown schema_version.
ScanRecord decode_record(const std::string& json_line);

// JSONL helpers for the ".scan.jsonl" persistence format.
std::vector<ScanRecord> read_records_file(const std::string& path);
void write_records_file(const std::string& path, const std::vector<ScanRecord>& records);

}  // namespace iotscan
