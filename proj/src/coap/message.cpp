#include "iotscan/coap/message.hpp"

#include <algorithm>
#include <stdexcept>

namespace iotscan::coap {

namespace {

// Returns the nibble plus any extension bytes for an option delta/length value.
void encode_ext(std::uint32_t value, std::uint8_t& nibble, std::vector<std::uint8_t>& ext) {
    if (value < 13) {
        nibble = static_cast<std::uint8_t>(value);
    } else if (value < 269) {
        nibble = 13;
        ext.push_back(static_cast<std::uint8_t>(value - 13));
    } else {
        nibble = 14;
        const std::uint32_t v = value - 269;
        ext.push_back(static_cast<std::uint8_t>(v >> 8));
        ext.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
}

std::optional<std::uint32_t> decode_ext(std::uint8_t nibble, const std::uint8_t*& p,
                                        const std::uint8_t* end) {
    if (nibble < 13) return nibble;
    if (nibble == 13) {
        if (p >= end) return std::nullopt;
        return 13u + *p++;
    }
    if (nibble == 14) {
        if (end - p < 2) return std::nullopt;
        std::uint32_t v = (static_cast<std::uint32_t>(p[0]) << 8) | p[1];
        p += 2;
        return 269u + v;
    }
    return std::nullopt;  // 15 is reserved (payload marker)
}

}  // namespace

std::vector<std::string> Message::uri_path_segments() const {
    std::vector<std::string> out;
    for (const auto& o : options)
        if (o.number == kOptUriPath) out.push_back(o.value_string());
    return out;
}

std::optional<std::string> Message::first_query() const {
    for (const auto& o : options)
        if (o.number == kOptUriQuery) return o.value_string();
    return std::nullopt;
}

std::vector<std::uint8_t> Message::encode() const {
    if (token.size() > 8) throw std::runtime_error("coap: token too long");
    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(0x40 | (static_cast<int>(type) << 4) |
                                            static_cast<int>(token.size())));
    out.push_back(code_raw);
    out.push_back(static_cast<std::uint8_t>(message_id >> 8));
    out.push_back(static_cast<std::uint8_t>(message_id & 0xff));
    out.insert(out.end(), token.begin(), token.end());

    std::vector<Option> sorted = options;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Option& a, const Option& b) { return a.number < b.number; });
    std::uint16_t prev = 0;
    for (const auto& o : sorted) {
        std::uint8_t dn = 0, ln = 0;
        std::vector<std::uint8_t> dext, lext;
        encode_ext(static_cast<std::uint32_t>(o.number - prev), dn, dext);
        encode_ext(static_cast<std::uint32_t>(o.value.size()), ln, lext);
        out.push_back(static_cast<std::uint8_t>((dn << 4) | ln));
        out.insert(out.end(), dext.begin(), dext.end());
        out.insert(out.end(), lext.begin(), lext.end());
        out.insert(out.end(), o.value.begin(), o.value.end());
        prev = o.number;
    }
    if (!payload.empty()) {
        out.push_back(0xff);
        out.insert(out.end(), payload.begin(), payload.end());
    }
    return out;
}

std::optional<Message> Message::parse(const std::uint8_t* data, std::size_t len) {
    if (len < 4) return std::nullopt;
    if ((data[0] >> 6) != 1) return std::nullopt;  // version must be 1
    Message m;
    m.type = static_cast<Type>((data[0] >> 4) & 0x3);
    const std::size_t tkl = data[0] & 0x0f;
    if (tkl > 8) return std::nullopt;
    m.code_raw = data[1];
    m.message_id = static_cast<std::uint16_t>((data[2] << 8) | data[3]);
    const std::uint8_t* p = data + 4;
    const std::uint8_t* end = data + len;
    if (static_cast<std::size_t>(end - p) < tkl) return std::nullopt;
    m.token.assign(p, p + tkl);
    p += tkl;

    std::uint16_t number = 0;
    while (p < end) {
        if (*p == 0xff) {
            ++p;
            if (p == end) return std::nullopt;  // marker with empty payload is malformed
            m.payload.assign(p, end);
            p = end;
            break;
        }
        const std::uint8_t dn = *p >> 4;
        const std::uint8_t ln = *p & 0x0f;
        ++p;
        auto delta = decode_ext(dn, p, end);
        auto olen = decode_ext(ln, p, end);
        if (!delta || !olen) return std::nullopt;
        if (static_cast<std::size_t>(end - p) < *olen) return std::nullopt;
        number = static_cast<std::uint16_t>(number + *delta);
        Option o;
        o.number = number;
        o.value.assign(p, p + *olen);
        p += *olen;
        m.options.push_back(std::move(o));
    }
    return m;
}

Message make_get(const std::vector<std::string>& path_segments, std::uint16_t message_id,
                 const std::vector<std::uint8_t>& token) {
    Message m;
    m.type = Type::Confirmable;
    m.code_raw = kCodeGet;
    m.message_id = message_id;
    m.token = token;
    for (const auto& seg : path_segments)
        m.options.push_back(Option{kOptUriPath, {seg.begin(), seg.end()}});
    return m;
}

std::string method_name(std::uint8_t code_raw) {
    switch (code_raw) {
        case kCodeEmpty: return "EMPTY";
        case kCodeGet: return "GET";
        case kCodePost: return "POST";
        case kCodePut: return "PUT";
        case kCodeDelete: return "DELETE";
        default: break;
    }
    if ((code_raw >> 5) == 0) return "req 0." + std::to_string(code_raw & 0x1f);
    return "resp " + CoapCode{code_raw >> 5, code_raw & 0x1f}.to_string();
}

std::vector<std::uint8_t> hex_decode(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw std::runtime_error("hex: odd length");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::runtime_error("hex: bad digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

}  // namespace iotscan::coap
