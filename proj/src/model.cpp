#include "iotscan/model.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace iotscan {

using nlohmann::json;

std::string to_string(Protocol p) {
    switch (p) {
        case Protocol::Mqtt: return "mqtt";
        case Protocol::Coap: return "coap";
        case Protocol::Xmpp: return "xmpp";
    }
    return "?";
}

std::optional<Protocol> protocol_from_string(const std::string& s) {
    if (s == "mqtt") return Protocol::Mqtt;
    if (s == "coap") return Protocol::Coap;
    if (s == "xmpp") return Protocol::Xmpp;
    return std::nullopt;
}

std::string to_string(ThreatClass c) {
    switch (c) {
        case ThreatClass::InformationLeakage: return "information-leakage";
        case ThreatClass::WeakAuthentication: return "weak-authentication";
        case ThreatClass::DenialOfService: return "denial-of-service";
    }
    return "?";
}

std::optional<ThreatClass> threat_class_from_string(const std::string& s) {
    if (s == "information-leakage" || s == "info-leak") return ThreatClass::InformationLeakage;
    if (s == "weak-authentication" || s == "weak-auth") return ThreatClass::WeakAuthentication;
    if (s == "denial-of-service" || s == "dos") return ThreatClass::DenialOfService;
    return std::nullopt;
}

std::string to_string(Severity s) {
    switch (s) {
        case Severity::Info: return "info";
        case Severity::Low: return "low";
        case Severity::Medium: return "medium";
        case Severity::High: return "high";
    }
    return "?";
}

std::optional<Severity> severity_from_string(const std::string& s) {
    if (s == "info") return Severity::Info;
    if (s == "low") return Severity::Low;
    if (s == "medium") return Severity::Medium;
    if (s == "high") return Severity::High;
    return std::nullopt;
}

std::string Target::endpoint() const {
    if (address.v6) return "[" + address.to_string() + "]:" + std::to_string(port);
    return address.to_string() + ":" + std::to_string(port);
}

std::string CoapCode::to_string() const {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%d.%02d", cls, detail);
    return buf;
}

std::string to_string(ResourceStatus s) {
    switch (s) {
        case ResourceStatus::Available: return "available";
        case ResourceStatus::Unauthorized: return "unauthorized";
        case ResourceStatus::NotFound: return "not-found";
        case ResourceStatus::MethodNotAllowed: return "method-not-allowed";
        case ResourceStatus::Other: return "other";
        case ResourceStatus::Timeout: return "timeout";
    }
    return "?";
}

std::optional<ResourceStatus> resource_status_from_string(const std::string& s) {
    if (s == "available") return ResourceStatus::Available;
    if (s == "unauthorized") return ResourceStatus::Unauthorized;
    if (s == "not-found") return ResourceStatus::NotFound;
    if (s == "method-not-allowed") return ResourceStatus::MethodNotAllowed;
    if (s == "other") return ResourceStatus::Other;
    if (s == "timeout") return ResourceStatus::Timeout;
    return std::nullopt;
}

ResourceStatus classify_coap_code(CoapCode code) {
    if (code == CoapCode{2, 5} || code == CoapCode{2, 3}) return ResourceStatus::Available;
    if (code == CoapCode{4, 1}) return ResourceStatus::Unauthorized;
    if (code == CoapCode{4, 4}) return ResourceStatus::NotFound;
    if (code == CoapCode{4, 5}) return ResourceStatus::MethodNotAllowed;
    return ResourceStatus::Other;
}

std::int64_t AmplificationMeasurement::af_percent_x100() const {
    if (request_bytes == 0) return 0;
    const std::int64_t scaled = 10000LL * response_bytes;
    return (scaled + request_bytes / 2) / request_bytes;
}

std::string AmplificationMeasurement::af_percent_2dp() const {
    const std::int64_t x = af_percent_x100();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld.%02lld", static_cast<long long>(x / 100),
                  static_cast<long long>(x % 100));
    return buf;
}

bool AmplificationMeasurement::flagged() const {
    // Strictly greater than 100 %: equal sizes mean zero amplification.
    return request_bytes > 0 && 100LL * response_bytes > 100LL * request_bytes;
}

std::string to_string(Starttls s) {
    switch (s) {
        case Starttls::NotOffered: return "not-offered";
        case Starttls::Offered: return "offered";
        case Starttls::Required: return "required";
    }
    return "?";
}

std::string to_string(OpenRegistration r) {
    switch (r) {
        case OpenRegistration::NotOffered: return "not-offered";
        case OpenRegistration::PasswordRequired: return "password-required";
        case OpenRegistration::OpenWithoutPassword: return "open-without-password";
    }
    return "?";
}

std::string to_string(TlsVersion v) {
    switch (v) {
        case TlsVersion::Tls1_0: return "TLS1_0";
        case TlsVersion::Tls1_1: return "TLS1_1";
        case TlsVersion::Tls1_2: return "TLS1_2";
        case TlsVersion::Tls1_3: return "TLS1_3";
    }
    return "?";
}

std::optional<TlsVersion> tls_version_from_string(const std::string& s) {
    if (s == "TLS1_0") return TlsVersion::Tls1_0;
    if (s == "TLS1_1") return TlsVersion::Tls1_1;
    if (s == "TLS1_2") return TlsVersion::Tls1_2;
    if (s == "TLS1_3") return TlsVersion::Tls1_3;
    return std::nullopt;
}

std::string to_string(Provider p) {
    switch (p) {
        case Provider::Aws: return "aws";
        case Provider::Google: return "google";
        case Provider::Azure: return "azure";
        case Provider::Alibaba: return "alibaba";
        case Provider::Oracle: return "oracle";
        case Provider::Cloudflare: return "cloudflare";
        case Provider::Ibm: return "ibm";
        case Provider::DigitalOcean: return "digitalocean";
        case Provider::Yandex: return "yandex";
        case Provider::Salesforce: return "salesforce";
        case Provider::Other: return "other";
    }
    return "?";
}

std::optional<Provider> provider_from_string(const std::string& s) {
    if (s == "aws" || s == "amazon") return Provider::Aws;
    if (s == "google") return Provider::Google;
    if (s == "azure" || s == "microsoft") return Provider::Azure;
    if (s == "alibaba") return Provider::Alibaba;
    if (s == "oracle") return Provider::Oracle;
    if (s == "cloudflare") return Provider::Cloudflare;
    if (s == "ibm") return Provider::Ibm;
    if (s == "digitalocean") return Provider::DigitalOcean;
    if (s == "yandex") return Provider::Yandex;
    if (s == "salesforce") return Provider::Salesforce;
    if (s == "other") return Provider::Other;
    return std::nullopt;
}

std::vector<Finding> all_findings(const ScanRecord& record) {
    std::vector<Finding> out = record.findings;
    if (record.tls) out.insert(out.end(), record.tls->findings.begin(), record.tls->findings.end());
    return out;
}

// ---------------------------------------------------------------- validation

std::vector<std::string> validate_record(const ScanRecord& record,
                                         std::int64_t deadline_seconds) {
    std::vector<std::string> v;

    if (record.target.port == 0) v.push_back("target.port: outside 1-65535");
    if (record.schema_version <= 0) v.push_back("schema_version: must be positive");
    if (record.ended_at < record.started_at) v.push_back("ended_at: precedes started_at");
    if (record.ended_at.ms_since_epoch - record.started_at.ms_since_epoch >
        deadline_seconds * 1000)
        v.push_back("ended_at: exceeds per-backend deadline");

    if (!record.reachable) {
        if (record.observation) v.push_back("observation: present on unreachable record");
        if (!all_findings(record).empty()) v.push_back("findings: nonempty on unreachable record");
    }

    if (record.observation) {
        const bool kind_ok =
            (record.target.protocol == Protocol::Mqtt &&
             std::holds_alternative<MqttObservation>(*record.observation)) ||
            (record.target.protocol == Protocol::Coap &&
             std::holds_alternative<CoapObservation>(*record.observation)) ||
            (record.target.protocol == Protocol::Xmpp &&
             std::holds_alternative<XmppObservation>(*record.observation));
        if (!kind_ok) v.push_back("observation: kind does not match target protocol");

        if (const auto* m = std::get_if<MqttObservation>(&*record.observation)) {
            for (const auto& [topic, payload] : m->sys_payloads) {
                if (topic.rfind("$SYS/", 0) != 0)
                    v.push_back("sys_payloads: payload stored for non-$SYS/ topic " + topic);
                if (!m->topics.count(topic))
                    v.push_back("sys_payloads: key " + topic + " missing from topics");
                if (payload.size() > kSysPayloadCap)
                    v.push_back("sys_payloads: payload for " + topic + " exceeds cap");
            }
            if (m->outcome.retried_v5 &&
                (!m->outcome.first_attempt_code || *m->outcome.first_attempt_code != 1))
                v.push_back("outcome.retried_v5: set without a first-attempt code 1");
        }
        if (const auto* c = std::get_if<CoapObservation>(&*record.observation)) {
            bool wkc_available = false;
            for (const auto& r : c->resources) {
                const bool code_available =
                    r.response_code &&
                    (*r.response_code == CoapCode{2, 5} || *r.response_code == CoapCode{2, 3});
                if ((r.status == ResourceStatus::Available) != code_available)
                    v.push_back("resources: status/code mismatch for " + r.resource);
                if (r.resource == ".well-known/core" && r.status == ResourceStatus::Available)
                    wkc_available = true;
            }
            if (c->well_known_payload) {
                if (!wkc_available)
                    v.push_back("well_known_payload: present without available .well-known/core");
                if (c->well_known_payload->size() > kWellKnownPayloadCap)
                    v.push_back("well_known_payload: exceeds cap");
            }
            for (const auto& a : c->amplification) {
                if (a.request_bytes == 0)
                    v.push_back("amplification: request_bytes zero for " + a.signature_id);
            }
        }
        if (const auto* x = std::get_if<XmppObservation>(&*record.observation)) {
            if (x->open_registration != OpenRegistration::NotOffered &&
                !x->features.count("http://jabber.org/features/iq-register") &&
                !x->registration_cleanup_ok.has_value())
                v.push_back(
                    "open_registration: set without advertised in-band registration or an "
                    "accepted registration stanza");
        }
    }

    if (record.tls) {
        if (!record.tls->tls_supported && record.tls->matrix)
            v.push_back("tls.matrix: present while tls_supported is false");
        if (record.tls->matrix) {
            for (const auto& [ver, suites] : record.tls->matrix->ciphers_by_version) {
                (void)suites;
                if (!record.tls->matrix->versions_supported.count(ver))
                    v.push_back("tls.ciphers_by_version: key " + to_string(ver) +
                                " not in versions_supported");
            }
            if (record.tls->matrix->certificate &&
                !(record.tls->matrix->certificate->not_before <
                  record.tls->matrix->certificate->not_after))
                v.push_back("tls.certificate: not_before is not before not_after");
        }
    }

    if (record.augment && record.augment->managed_aws &&
        record.augment->provider != Provider::Aws)
        v.push_back("augment: managed_aws requires provider AWS");

    return v;
}

// ------------------------------------------------------------------- JSON IO

namespace {

json finding_to_json(const Finding& f) {
    return json{{"threat_class", to_string(f.threat_class)},
                {"vuln_id", f.vuln_id},
                {"evidence", f.evidence},
                {"severity", to_string(f.severity)},
                {"detector", f.detector}};
}

Finding finding_from_json(const json& j) {
    Finding f;
    auto tc = threat_class_from_string(j.at("threat_class").get<std::string>());
    auto sev = severity_from_string(j.at("severity").get<std::string>());
    if (!tc || !sev) throw std::runtime_error("finding: bad threat_class or severity");
    f.threat_class = *tc;
    f.severity = *sev;
    f.vuln_id = j.at("vuln_id").get<std::string>();
    f.evidence = j.at("evidence").get<std::vector<std::string>>();
    f.detector = j.at("detector").get<std::string>();
    return f;
}

json mqtt_to_json(const MqttObservation& m) {
    json out{{"kind", "mqtt"}};
    json oc;
    if (m.outcome.code)
        oc["code"] = *m.outcome.code;
    else
        oc["code"] = "network-error";
    oc["protocol_version_used"] = m.outcome.protocol_version_used == MqttVersion::V5 ? "v5" : "v311";
    oc["retried_v5"] = m.outcome.retried_v5;
    if (m.outcome.first_attempt_code) oc["first_attempt_code"] = *m.outcome.first_attempt_code;
    if (m.outcome.raw_v5_reason_code) oc["raw_v5_reason_code"] = *m.outcome.raw_v5_reason_code;
    out["outcome"] = std::move(oc);
    out["topics"] = m.topics;
    out["sys_payloads"] = m.sys_payloads;
    if (m.broker_software)
        out["broker_software"] =
            json{{"name", m.broker_software->name}, {"version", m.broker_software->version}};
    if (m.connected_clients) out["connected_clients"] = *m.connected_clients;
    out["listen_seconds"] = m.listen_seconds;
    if (!m.denied_subscriptions.empty()) out["denied_subscriptions"] = m.denied_subscriptions;
    return out;
}

MqttObservation mqtt_from_json(const json& j) {
    MqttObservation m;
    const json& oc = j.at("outcome");
    if (oc.at("code").is_number_integer())
        m.outcome.code = oc.at("code").get<int>();
    m.outcome.protocol_version_used =
        oc.at("protocol_version_used").get<std::string>() == "v5" ? MqttVersion::V5
                                                                  : MqttVersion::V311;
    m.outcome.retried_v5 = oc.at("retried_v5").get<bool>();
    if (oc.contains("first_attempt_code")) m.outcome.first_attempt_code = oc["first_attempt_code"].get<int>();
    if (oc.contains("raw_v5_reason_code")) m.outcome.raw_v5_reason_code = oc["raw_v5_reason_code"].get<int>();
    m.topics = j.at("topics").get<std::map<std::string, std::uint64_t>>();
    m.sys_payloads = j.at("sys_payloads").get<std::map<std::string, std::string>>();
    if (j.contains("broker_software"))
        m.broker_software = SoftwareId{j["broker_software"].at("name").get<std::string>(),
                                       j["broker_software"].at("version").get<std::string>()};
    if (j.contains("connected_clients"))
        m.connected_clients = j["connected_clients"].get<std::uint64_t>();
    m.listen_seconds = j.at("listen_seconds").get<double>();
    if (j.contains("denied_subscriptions"))
        m.denied_subscriptions = j["denied_subscriptions"].get<std::vector<std::string>>();
    return m;
}

json coap_to_json(const CoapObservation& c) {
    json out{{"kind", "coap"}};
    json rs = json::array();
    for (const auto& r : c.resources) {
        json e{{"resource", r.resource}, {"status", to_string(r.status)}};
        if (r.response_code) e["response_code"] = r.response_code->to_string();
        if (r.diagnostic) e["diagnostic"] = *r.diagnostic;
        rs.push_back(std::move(e));
    }
    out["resources"] = std::move(rs);
    if (c.well_known_payload) out["well_known_payload"] = *c.well_known_payload;
    if (c.software)
        out["software"] = json{{"name", c.software->name}, {"version", c.software->version}};
    json amps = json::array();
    for (const auto& a : c.amplification)
        amps.push_back(json{{"signature_id", a.signature_id},
                            {"request_bytes", a.request_bytes},
                            {"response_bytes", a.response_bytes}});
    out["amplification"] = std::move(amps);
    return out;
}

std::optional<CoapCode> coap_code_from_string(const std::string& s) {
    int cls = 0, detail = 0;
    if (std::sscanf(s.c_str(), "%d.%d", &cls, &detail) != 2) return std::nullopt;
    return CoapCode{cls, detail};
}

CoapObservation coap_from_json(const json& j) {
    CoapObservation c;
    for (const auto& e : j.at("resources")) {
        ResourceProbeResult r;
        r.resource = e.at("resource").get<std::string>();
        auto st = resource_status_from_string(e.at("status").get<std::string>());
        if (!st) throw std::runtime_error("coap: bad resource status");
        r.status = *st;
        if (e.contains("response_code")) {
            r.response_code = coap_code_from_string(e["response_code"].get<std::string>());
            if (!r.response_code) throw std::runtime_error("coap: bad response code");
        }
        if (e.contains("diagnostic")) r.diagnostic = e["diagnostic"].get<std::string>();
        c.resources.push_back(std::move(r));
    }
    if (j.contains("well_known_payload"))
        c.well_known_payload = j["well_known_payload"].get<std::string>();
    if (j.contains("software"))
        c.software = SoftwareId{j["software"].at("name").get<std::string>(),
                                j["software"].at("version").get<std::string>()};
    for (const auto& e : j.at("amplification")) {
        AmplificationMeasurement a;
        a.signature_id = e.at("signature_id").get<std::string>();
        a.request_bytes = e.at("request_bytes").get<std::uint32_t>();
        a.response_bytes = e.at("response_bytes").get<std::uint32_t>();
        c.amplification.push_back(std::move(a));
    }
    return c;
}

json xmpp_to_json(const XmppObservation& x) {
    json out{{"kind", "xmpp"}};
    if (x.server_software)
        out["server_software"] =
            json{{"name", x.server_software->name}, {"version", x.server_software->version}};
    out["sasl_mechanisms"] = x.sasl_mechanisms;
    out["starttls"] = to_string(x.starttls);
    out["features"] = x.features;
    out["open_registration"] = to_string(x.open_registration);
    if (x.language) out["language"] = *x.language;
    if (x.registration_cleanup_ok) out["registration_cleanup_ok"] = *x.registration_cleanup_ok;
    if (x.parse_error_head) out["parse_error_head"] = *x.parse_error_head;
    return out;
}

XmppObservation xmpp_from_json(const json& j) {
    XmppObservation x;
    if (j.contains("server_software"))
        x.server_software = SoftwareId{j["server_software"].at("name").get<std::string>(),
                                       j["server_software"].at("version").get<std::string>()};
    x.sasl_mechanisms = j.at("sasl_mechanisms").get<std::set<std::string>>();
    const std::string st = j.at("starttls").get<std::string>();
    x.starttls = st == "required"  ? Starttls::Required
                 : st == "offered" ? Starttls::Offered
                                   : Starttls::NotOffered;
    x.features = j.at("features").get<std::set<std::string>>();
    const std::string reg = j.at("open_registration").get<std::string>();
    x.open_registration = reg == "open-without-password" ? OpenRegistration::OpenWithoutPassword
                          : reg == "password-required"   ? OpenRegistration::PasswordRequired
                                                         : OpenRegistration::NotOffered;
    if (j.contains("language")) x.language = j["language"].get<std::string>();
    if (j.contains("registration_cleanup_ok"))
        x.registration_cleanup_ok = j["registration_cleanup_ok"].get<bool>();
    if (j.contains("parse_error_head")) x.parse_error_head = j["parse_error_head"].get<std::string>();
    return x;
}

json cert_to_json(const CertInfo& c) {
    return json{{"subject_cn", c.subject_cn},
                {"san_dns_names", c.san_dns_names},
                {"not_before", format_rfc3339_ms(c.not_before)},
                {"not_after", format_rfc3339_ms(c.not_after)},
                {"serial", c.serial}};
}

CertInfo cert_from_json(const json& j) {
    CertInfo c;
    c.subject_cn = j.at("subject_cn").get<std::string>();
    c.san_dns_names = j.at("san_dns_names").get<std::vector<std::string>>();
    auto nb = parse_rfc3339(j.at("not_before").get<std::string>());
    auto na = parse_rfc3339(j.at("not_after").get<std::string>());
    if (!nb || !na) throw std::runtime_error("cert: bad timestamp");
    c.not_before = *nb;
    c.not_after = *na;
    c.serial = j.at("serial").get<std::string>();
    return c;
}

json tls_to_json(const TlsObservation& t) {
    json out{{"tls_supported", t.tls_supported}};
    if (t.matrix) {
        json m;
        json versions = json::array();
        for (auto v : t.matrix->versions_supported) versions.push_back(to_string(v));
        m["versions_supported"] = std::move(versions);
        json cbv;
        for (const auto& [ver, suites] : t.matrix->ciphers_by_version)
            cbv[to_string(ver)] = suites;
        m["ciphers_by_version"] = std::move(cbv);
        if (t.matrix->dh_prime_bits) m["dh_prime_bits"] = *t.matrix->dh_prime_bits;
        if (t.matrix->certificate) m["certificate"] = cert_to_json(*t.matrix->certificate);
        out["matrix"] = std::move(m);
    }
    json fs = json::array();
    for (const auto& f : t.findings) fs.push_back(finding_to_json(f));
    out["findings"] = std::move(fs);
    return out;
}

TlsObservation tls_from_json(const json& j) {
    TlsObservation t;
    t.tls_supported = j.at("tls_supported").get<bool>();
    if (j.contains("matrix")) {
        TlsCapabilityMatrix m;
        for (const auto& v : j["matrix"].at("versions_supported")) {
            auto ver = tls_version_from_string(v.get<std::string>());
            if (!ver) throw std::runtime_error("tls: bad version");
            m.versions_supported.insert(*ver);
        }
        for (const auto& [key, suites] : j["matrix"].at("ciphers_by_version").items()) {
            auto ver = tls_version_from_string(key);
            if (!ver) throw std::runtime_error("tls: bad version key");
            m.ciphers_by_version[*ver] = suites.get<std::vector<std::string>>();
        }
        if (j["matrix"].contains("dh_prime_bits"))
            m.dh_prime_bits = j["matrix"]["dh_prime_bits"].get<int>();
        if (j["matrix"].contains("certificate"))
            m.certificate = cert_from_json(j["matrix"]["certificate"]);
        t.matrix = std::move(m);
    }
    for (const auto& f : j.at("findings")) t.findings.push_back(finding_from_json(f));
    return t;
}

}  // namespace

std::string encode_record(const ScanRecord& r) {
    json out;
    json tgt{{"address", r.target.address.to_string()},
             {"port", r.target.port},
             {"protocol", to_string(r.target.protocol)}};
    if (r.target.hostname) tgt["hostname"] = *r.target.hostname;
    out["target"] = std::move(tgt);
    out["scan_id"] = r.scan_id;
    out["started_at"] = format_rfc3339_ms(r.started_at);
    out["ended_at"] = format_rfc3339_ms(r.ended_at);
    out["reachable"] = r.reachable;
    if (r.observation) {
        if (const auto* m = std::get_if<MqttObservation>(&*r.observation))
            out["observation"] = mqtt_to_json(*m);
        else if (const auto* c = std::get_if<CoapObservation>(&*r.observation))
            out["observation"] = coap_to_json(*c);
        else if (const auto* x = std::get_if<XmppObservation>(&*r.observation))
            out["observation"] = xmpp_to_json(*x);
    }
    if (r.tls) out["tls"] = tls_to_json(*r.tls);
    if (r.augment)
        out["augment"] = json{{"country", r.augment->country},
                              {"provider", to_string(r.augment->provider)},
                              {"managed_aws", r.augment->managed_aws}};
    json fs = json::array();
    for (const auto& f : r.findings) fs.push_back(finding_to_json(f));
    out["findings"] = std::move(fs);
    out["schema_version"] = r.schema_version;
    return out.dump();
}

ScanRecord decode_record(const std::string& line) {
    json j = json::parse(line);
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
        throw std::runtime_error("unknown schema_version " + std::to_string(version));

    ScanRecord r;
    r.schema_version = version;
    const json& tgt = j.at("target");
    auto addr = IpAddress::parse(tgt.at("address").get<std::string>());
    if (!addr) throw std::runtime_error("target.address: not an IP literal");
    r.target.address = *addr;
    const int port = tgt.at("port").get<int>();
    if (port < 1 || port > 65535) throw std::runtime_error("target.port: out of range");
    r.target.port = static_cast<std::uint16_t>(port);
    auto proto = protocol_from_string(tgt.at("protocol").get<std::string>());
    if (!proto) throw std::runtime_error("target.protocol: unknown");
    r.target.protocol = *proto;
    if (tgt.contains("hostname")) r.target.hostname = tgt["hostname"].get<std::string>();

    r.scan_id = j.at("scan_id").get<std::string>();
    auto started = parse_rfc3339(j.at("started_at").get<std::string>());
    auto ended = parse_rfc3339(j.at("ended_at").get<std::string>());
    if (!started || !ended) throw std::runtime_error("record: bad timestamps");
    r.started_at = *started;
    r.ended_at = *ended;
    r.reachable = j.at("reachable").get<bool>();

    if (j.contains("observation")) {
        const std::string kind = j["observation"].at("kind").get<std::string>();
        if (kind == "mqtt")
            r.observation = mqtt_from_json(j["observation"]);
        else if (kind == "coap")
            r.observation = coap_from_json(j["observation"]);
        else if (kind == "xmpp")
            r.observation = xmpp_from_json(j["observation"]);
        else
            throw std::runtime_error("observation.kind: unknown");
    }
    if (j.contains("tls")) r.tls = tls_from_json(j["tls"]);
    if (j.contains("augment")) {
        AugmentInfo a;
        a.country = j["augment"].at("country").get<std::string>();
        auto prov = provider_from_string(j["augment"].at("provider").get<std::string>());
        if (!prov) throw std::runtime_error("augment.provider: unknown");
        a.provider = *prov;
        a.managed_aws = j["augment"].at("managed_aws").get<bool>();
        r.augment = a;
    }
    for (const auto& f : j.at("findings")) r.findings.push_back(finding_from_json(f));
    return r;
}

std::vector<ScanRecord> read_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<ScanRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(decode_record(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_records_file(const std::string& path, const std::vector<ScanRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : records) out << encode_record(r) << '\n';
}

}  // namespace iotscan
