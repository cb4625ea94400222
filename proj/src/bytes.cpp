#include "msauth/bytes.hpp"

#include <algorithm>

#include "msauth/errors.hpp"

namespace msauth {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Value Value::zeros(std::size_t width) {
    return Value(std::vector<std::uint8_t>(width, 0));
}

Value Value::from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw ProtocolError(Reject::malformed_frame, "odd hex length");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw ProtocolError(Reject::malformed_frame, "invalid hex digit");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return Value(std::move(out));
}

Value Value::from_text(std::string_view text) {
    return Value(std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string Value::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Value xor_combine(const Value& a, const Value& b) {
    const Value& wide = a.width() >= b.width() ? a : b;
    const Value& narrow = a.width() >= b.width() ? b : a;
    std::vector<std::uint8_t> out(wide.bytes().begin(), wide.bytes().end());
    for (std::size_t i = 0; i < narrow.width(); ++i) out[i] ^= narrow[i];
    return Value(std::move(out));
}

Value pad(const Value& v, std::size_t width) {
    if (v.width() > width)
        throw ProtocolError(Reject::width_violation, "pad cannot shrink");
    std::vector<std::uint8_t> out(v.bytes().begin(), v.bytes().end());
    out.resize(width, 0);
    return Value(std::move(out));
}

Value truncate(const Value& v, std::size_t width) {
    if (v.width() < width)
        throw ProtocolError(Reject::width_violation, "truncate beyond width");
    return Value(std::vector<std::uint8_t>(v.bytes().begin(), v.bytes().begin() + static_cast<std::ptrdiff_t>(width)));
}

std::vector<std::uint8_t> concat(std::initializer_list<const Value*> parts) {
    std::size_t total = 0;
    for (const Value* p : parts) total += p->width();
    std::vector<std::uint8_t> out;
    out.reserve(total);
    for (const Value* p : parts) out.insert(out.end(), p->bytes().begin(), p->bytes().end());
    return out;
}

std::vector<std::uint8_t> concat(std::span<const Value> parts) {
    std::size_t total = 0;
    for (const Value& p : parts) total += p.width();
    std::vector<std::uint8_t> out;
    out.reserve(total);
    for (const Value& p : parts) out.insert(out.end(), p.bytes().begin(), p.bytes().end());
    return out;
}

void require_width(const Value& v, std::size_t width, const char* what) {
    if (v.width() != width)
        throw ProtocolError(Reject::width_violation, std::string(what) + " must be " +
                                                         std::to_string(width) + " bytes, got " +
                                                         std::to_string(v.width()));
}

Value Timestamp::to_value() const {
    return Value({static_cast<std::uint8_t>(seconds >> 24), static_cast<std::uint8_t>(seconds >> 16),
                  static_cast<std::uint8_t>(seconds >> 8), static_cast<std::uint8_t>(seconds)});
}

Timestamp Timestamp::from_value(const Value& v) {
    require_width(v, kTimestampWidth, "timestamp");
    return Timestamp{static_cast<std::uint32_t>(v[0]) << 24 | static_cast<std::uint32_t>(v[1]) << 16 |
                     static_cast<std::uint32_t>(v[2]) << 8 | static_cast<std::uint32_t>(v[3])};
}

const char* to_string(Reject r) {
    switch (r) {
        case Reject::width_violation: return "width-violation";
        case Reject::credential_mismatch: return "credential-mismatch";
        case Reject::duplicate_identity: return "duplicate-identity";
        case Reject::unknown_server: return "unknown-server";
        case Reject::unknown_user: return "unknown-user";
        case Reject::stale_request: return "stale-request";
        case Reject::request_forgery: return "request-forgery";
        case Reject::stale_response: return "stale-response";
        case Reject::response_forgery: return "response-forgery";
        case Reject::replayed_request: return "replayed-request";
        case Reject::weak_password: return "weak-password";
        case Reject::malformed_frame: return "malformed-frame";
        case Reject::login_in_progress: return "login-in-progress";
        case Reject::no_pending_login: return "no-pending-login";
        case Reject::resource_budget_exceeded: return "resource-budget-exceeded";
    }
    return "unknown";
}

}  // namespace msauth
