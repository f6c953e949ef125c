#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iotscan/model.hpp"

namespace iotscan::coap {

// Option numbers used by the probes (RFC 7252 / RFC 8613 registry).
inline constexpr std::uint16_t kOptUriHost = 3;
inline constexpr std::uint16_t kOptUriPath = 11;
inline constexpr std::uint16_t kOptContentFormat = 12;
inline constexpr std::uint16_t kOptUriQuery = 15;
inline constexpr std::uint16_t kOptAccept = 17;

inline constexpr std::uint8_t kCodeEmpty = 0x00;
inline constexpr std::uint8_t kCodeGet = 0x01;
inline constexpr std::uint8_t kCodePost = 0x02;
inline constexpr std::uint8_t kCodePut = 0x03;
inline constexpr std::uint8_t kCodeDelete = 0x04;

enum class Type : std::uint8_t { Confirmable = 0, NonConfirmable = 1, Ack = 2, Reset = 3 };

struct Option {
    std::uint16_t number = 0;
    std::vector<std::uint8_t> value;

    friend bool operator==(const Option&, const Option&) = default;
    std::string value_string() const { return std::string(value.begin(), value.end()); }
};

struct Message {
    Type type = Type::Confirmable;
    std::uint8_t code_raw = 0;  // (class << 5) | detail
    std::uint16_t message_id = 0;
    std::vector<std::uint8_t> token;
    std::vector<Option> options;  // kept sorted by number on encode
    std::vector<std::uint8_t> payload;

    CoapCode code() const { return CoapCode{code_raw >> 5, code_raw & 0x1f}; }
    static std::uint8_t make_code(int cls, int detail) {
        return static_cast<std::uint8_t>((cls << 5) | detail);
    }

    bool is_request() const { return code_raw != 0 && (code_raw >> 5) == 0; }
    std::vector<std::string> uri_path_segments() const;
    std::optional<std::string> first_query() const;

    std::vector<std::uint8_t> encode() const;
    static std::optional<Message> parse(const std::uint8_t* data, std::size_t len);
    static std::optional<Message> parse(const std::vector<std::uint8_t>& data) {
        return parse(data.data(), data.size());
    }
};

// Convenience builder for the only request shape the probe emits.
Message make_get(const std::vector<std::string>& path_segments, std::uint16_t message_id,
                 const std::vector<std::uint8_t>& token);

std::string method_name(std::uint8_t code_raw);  // "GET", "POST", ... or "resp 2.05"

std::vector<std::uint8_t> hex_decode(const std::string& hex);  // throws on bad input
std::string hex_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace iotscan::coap
