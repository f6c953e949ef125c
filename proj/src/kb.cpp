#include "iotscan/kb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "iotscan/coap/message.hpp"

namespace iotscan {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::optional<Version> Version::parse(const std::string& text) {
    Version v;
    v.raw = text;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) break;
        long value = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            value = value * 10 + (text[i] - '0');
            if (value > 1'000'000'000) return std::nullopt;
            ++i;
        }
        v.components.push_back(static_cast<int>(value));
        if (i < text.size() && text[i] == '.' && i + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            ++i;
            continue;
        }
        break;
    }
    if (v.components.empty()) return std::nullopt;
    v.suffix = text.substr(i);
    return v;
}

std::strong_ordering compare_versions(const Version& a, const Version& b) {
    const std::size_t n = std::max(a.components.size(), b.components.size());
    for (std::size_t i = 0; i < n; ++i) {
        const int av = i < a.components.size() ? a.components[i] : 0;
        const int bv = i < b.components.size() ? b.components[i] : 0;
        if (av != bv) return av <=> bv;
    }
    return std::strong_ordering::equal;
}

bool VersionRangeRule::contains(const Version& v) const {
    if (min_inclusive && compare_versions(v, *min_inclusive) == std::strong_ordering::less)
        return false;
    if (max_inclusive && compare_versions(v, *max_inclusive) == std::strong_ordering::greater)
        return false;
    if (max_exclusive && compare_versions(v, *max_exclusive) != std::strong_ordering::less)
        return false;
    return true;
}

std::vector<Finding> match_version_rules(const SoftwareId& software,
                                         const std::vector<VersionRangeRule>& rules,
                                         const std::string& detector) {
    std::vector<Finding> out;
    const auto version = Version::parse(software.version);
    if (!version) return out;
    const std::string name = lower(software.name);
    for (const auto& rule : rules) {
        if (lower(rule.software) != name) continue;
        if (!rule.contains(*version)) continue;
        std::string range = "[";
        range += rule.min_inclusive ? rule.min_inclusive->raw : "";
        range += ",";
        if (rule.max_inclusive)
            range += rule.max_inclusive->raw + "]";
        else if (rule.max_exclusive)
            range += rule.max_exclusive->raw + ")";
        else
            range += "]";
        for (const auto& id : rule.vuln_ids) {
            Finding f;
            f.threat_class = rule.threat_class;
            f.vuln_id = id;
            f.severity = rule.severity;
            f.detector = detector;
            f.evidence = {"software=" + software.name, "version=" + software.version,
                          "matched_range=" + range};
            out.push_back(std::move(f));
        }
    }
    return out;
}

std::optional<SoftwareId> match_coap_fingerprint(const std::vector<std::string>& texts,
                                                 const KnowledgeBase& kb) {
    for (const auto& fp : kb.fingerprints) {
        for (const auto& text : texts) {
            if (text.find(fp.match_substring) == std::string::npos) continue;
            std::string version = "unknown";
            if (!fp.version_regex.empty()) {
                std::smatch m;
                if (std::regex_search(text, m, std::regex(fp.version_regex)) && m.size() > 1)
                    version = m[1].str();
            }
            return SoftwareId{fp.software, version};
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------------ KB files

namespace {

// Splits a line into tokens; double quotes group words ('match="a b c"').
std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            continue;
        }
        if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
            continue;
        }
        cur.push_back(c);
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::optional<std::string> value_of(const std::vector<std::string>& tokens,
                                    const std::string& key) {
    const std::string prefix = key + "=";
    for (const auto& t : tokens)
        if (t.rfind(prefix, 0) == 0) return t.substr(prefix.size());
    return std::nullopt;
}

Version parse_version_or_throw(const std::string& text, const std::string& where) {
    auto v = Version::parse(text);
    if (!v) throw std::runtime_error(where + ": unparsable version '" + text + "'");
    return *v;
}

// range=[a,b] | [a,b) | [,b] | [,b) | [a,] | [,]
void parse_range(const std::string& spec, VersionRangeRule& rule, const std::string& where) {
    if (spec.size() < 3 || spec.front() != '[' || (spec.back() != ']' && spec.back() != ')'))
        throw std::runtime_error(where + ": bad range '" + spec + "'");
    const bool exclusive = spec.back() == ')';
    const std::string inner = spec.substr(1, spec.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) throw std::runtime_error(where + ": range needs a comma");
    const std::string lo = inner.substr(0, comma);
    const std::string hi = inner.substr(comma + 1);
    if (!lo.empty()) rule.min_inclusive = parse_version_or_throw(lo, where);
    if (!hi.empty()) {
        if (exclusive)
            rule.max_exclusive = parse_version_or_throw(hi, where);
        else
            rule.max_inclusive = parse_version_or_throw(hi, where);
    } else if (exclusive) {
        throw std::runtime_error(where + ": open upper bound cannot be exclusive");
    }
    if (rule.min_inclusive) {
        const Version* upper = rule.max_inclusive   ? &*rule.max_inclusive
                               : rule.max_exclusive ? &*rule.max_exclusive
                                                    : nullptr;
        if (upper &&
            compare_versions(*rule.min_inclusive, *upper) == std::strong_ordering::greater)
            throw std::runtime_error(where + ": min exceeds max");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

KnowledgeBase parse_kb(const std::string& content, const std::string& origin) {
    KnowledgeBase kb;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    bool any_entry = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        any_entry = true;
        const std::string where = origin + ":" + std::to_string(lineno);

        if (tokens[0] == "rule") {
            if (tokens.size() < 2) throw std::runtime_error(where + ": rule needs an id");
            VersionRangeRule rule;
            rule.vuln_ids = split(tokens[1], '+');
            for (const auto& id : rule.vuln_ids)
                if (id.empty()) throw std::runtime_error(where + ": empty vuln id");
            auto software = value_of(tokens, "software");
            auto range = value_of(tokens, "range");
            auto cls = value_of(tokens, "class");
            auto sev = value_of(tokens, "severity");
            auto proto = value_of(tokens, "proto");
            auto kind = value_of(tokens, "kind");
            if (!software || !range || !cls || !sev)
                throw std::runtime_error(where + ": rule needs software/range/class/severity");
            rule.software = lower(*software);
            parse_range(*range, rule, where);
            auto tc = threat_class_from_string(*cls);
            auto severity = severity_from_string(*sev);
            if (!tc || !severity) throw std::runtime_error(where + ": bad class or severity");
            rule.threat_class = *tc;
            rule.severity = *severity;
            if (proto) {
                auto p = protocol_from_string(*proto);
                if (!p) throw std::runtime_error(where + ": bad proto");
                rule.applies_to = *p;
            }
            if (kind) {
                if (*kind == "fingerprint")
                    rule.kind = RuleKind::Fingerprint;
                else if (*kind != "version-range")
                    throw std::runtime_error(where + ": bad kind '" + *kind + "'");
            }
            kb.version_rules.push_back(std::move(rule));
        } else if (tokens[0] == "sig") {
            if (tokens.size() < 2) throw std::runtime_error(where + ": sig needs an id");
            ProbeMatchSignature sig;
            sig.signature_id = tokens[1];
            auto proto = value_of(tokens, "proto");
            auto probe = value_of(tokens, "probe");
            auto flag = value_of(tokens, "flag");
            if (!proto || !probe || !flag)
                throw std::runtime_error(where + ": sig needs proto/probe/flag");
            auto p = protocol_from_string(*proto);
            if (!p) throw std::runtime_error(where + ": bad proto");
            sig.applies_to = *p;
            try {
                sig.request_bytes = coap::hex_decode(*probe);
            } catch (const std::exception& e) {
                throw std::runtime_error(where + ": " + e.what());
            }
            if (*flag == "af>100") {
                sig.flag_rule = FlagRule::AfGreaterThan100;
            } else if (flag->rfind("match:", 0) == 0) {
                sig.flag_rule = FlagRule::ResponseContains;
                sig.match_pattern = coap::hex_decode(flag->substr(6));
            } else {
                throw std::runtime_error(where + ": bad flag '" + *flag + "'");
            }
            if (auto cls = value_of(tokens, "class")) {
                auto tc = threat_class_from_string(*cls);
                if (!tc) throw std::runtime_error(where + ": bad class");
                sig.threat_class = *tc;
            }
            if (auto sev = value_of(tokens, "severity")) {
                auto s = severity_from_string(*sev);
                if (!s) throw std::runtime_error(where + ": bad severity");
                sig.severity = *s;
            }
            // ProbeMatch payloads must be benign, frame-valid requests.
            if (sig.applies_to == Protocol::Coap) {
                auto msg = coap::Message::parse(sig.request_bytes);
                if (!msg) throw std::runtime_error(where + ": probe is not a valid CoAP message");
                if (!msg->is_request() || msg->code_raw != coap::kCodeGet)
                    throw std::runtime_error(where + ": probe must be a CoAP GET");
            }
            kb.signatures.push_back(std::move(sig));
        } else if (tokens[0] == "fp") {
            CoapFingerprintPattern fp;
            auto software = value_of(tokens, "software");
            auto match = value_of(tokens, "match");
            if (!software || !match)
                throw std::runtime_error(where + ": fp needs software/match");
            fp.software = *software;
            fp.match_substring = *match;
            if (auto vre = value_of(tokens, "version")) fp.version_regex = *vre;
            if (!fp.version_regex.empty()) {
                try {
                    std::regex re(fp.version_regex);
                } catch (const std::regex_error&) {
                    throw std::runtime_error(where + ": bad version regex");
                }
            }
            kb.fingerprints.push_back(std::move(fp));
        } else {
            throw std::runtime_error(where + ": unknown entry '" + tokens[0] + "'");
        }
    }
    if (!any_entry) kb.warnings.push_back(origin + ": empty knowledge base");
    return kb;
}

KnowledgeBase load_kb(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open knowledge base " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_kb(ss.str(), path);
}

// ------------------------------------------------------------- built-in KB

namespace {

std::vector<std::uint8_t> zyxel_probe_bytes() {
    // GET .well-known/core with a labeled query; 53 bytes on the wire so the
    // testbed's 450-byte reply reproduces AF 849.06 %.
    coap::Message m = coap::make_get({".well-known", "core"}, 0x7a01,
                                     {'i', 'o', 't', 's', 'c', 'a', 'n', '0'});
    const std::string query = "title=zyxel-keenetic";
    m.options.push_back(coap::Option{coap::kOptUriQuery, {query.begin(), query.end()}});
    m.options.push_back(coap::Option{coap::kOptAccept, {40}});  // link-format
    return m.encode();
}

std::vector<std::uint8_t> iotivity_probe_bytes() {
    coap::Message m = coap::make_get({"oic", "res"}, 0x7a02,
                                     {'i', 'o', 't', 's', 'c', 'a', 'n', '1'});
    const std::string query = "rt=oic.wk.res";
    m.options.push_back(coap::Option{coap::kOptUriQuery, {query.begin(), query.end()}});
    return m.encode();
}

KnowledgeBase build_default_kb() {
    std::ostringstream kb;
    kb << "# Built-in knowledge base. Grammar: docs/kb-format.md\n"
       << "rule CVE-2017-7655 proto=mqtt software=mosquitto range=[1.0,1.4.15] class=dos "
          "severity=high\n"
       << "rule CVE-2018-12550+CVE-2018-12551 proto=mqtt software=mosquitto range=[,1.5.5) "
          "class=weak-auth severity=high\n"
       << "rule CVE-2019-9749 proto=mqtt software=fluentbit range=[,1.0.6) class=dos "
          "severity=high\n"
       << "rule CVE-2018-19417 proto=mqtt software=contiki range=[,4.1] class=dos severity=high\n"
       << "rule CVE-2018-12679 proto=coap kind=fingerprint software=freecoap range=[,] class=dos "
          "severity=high\n"
       << "sig ZYXEL_000 proto=coap probe=" << coap::hex_encode(zyxel_probe_bytes())
       << " flag=af>100 class=dos severity=medium\n"
       << "sig CVE-2019-9750 proto=coap probe=" << coap::hex_encode(iotivity_probe_bytes())
       << " flag=af>100 class=dos severity=medium\n"
       << "fp proto=coap software=FreeCoAP match=FreeCoAP/ version=\"FreeCoAP/([0-9][0-9.]*)\"\n"
       << "fp proto=coap software=aiocoap match=\"Error: Resource not found!\"\n";
    return parse_kb(kb.str(), "<built-in>");
}

}  // namespace

const KnowledgeBase& default_kb() {
    static const KnowledgeBase kb = build_default_kb();
    return kb;
}

}  // namespace iotscan
