#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msauth {

// Fixed widths used throughout the protocol, in bytes.
inline constexpr std::size_t kIdWidth = 8;         // identities, nonces, salts
inline constexpr std::size_t kDigestWidth = 32;    // SHA-256 output
inline constexpr std::size_t kTimestampWidth = 4;  // big-endian seconds

// Value is the universal byte-string carrier: identities, nonces, digests and
// every masked combination of them. Width is just the byte count; the XOR
// algebra below defines how mixed widths combine.
class Value {
public:
    Value() = default;
    explicit Value(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
    Value(std::initializer_list<std::uint8_t> bytes) : bytes_(bytes) {}

    static Value zeros(std::size_t width);
    static Value from_hex(std::string_view hex);
    static Value from_text(std::string_view text);  // raw bytes, e.g. passwords

    std::size_t width() const { return bytes_.size(); }
    bool empty() const { return bytes_.empty(); }
    std::span<const std::uint8_t> bytes() const { return bytes_; }
    const std::vector<std::uint8_t>& vec() const { return bytes_; }
    std::uint8_t operator[](std::size_t i) const { return bytes_[i]; }

    std::string hex() const;

    friend auto operator<=>(const Value&, const Value&) = default;

private:
    std::vector<std::uint8_t> bytes_;
};

// XOR with the shorter operand left-aligned and zero-padded on the right;
// result width is the wider operand's.
Value xor_combine(const Value& a, const Value& b);

// Right-pad with zeros up to `width`. Widening only.
Value pad(const Value& v, std::size_t width);

// First `width` bytes. Throws width_violation if the value is shorter.
Value truncate(const Value& v, std::size_t width);

// Raw concatenation at the operands' natural widths (hash input assembly).
std::vector<std::uint8_t> concat(std::initializer_list<const Value*> parts);
std::vector<std::uint8_t> concat(std::span<const Value> parts);

void require_width(const Value& v, std::size_t width, const char* what);

// Simulated wall-clock seconds, carried on the wire as 4 big-endian bytes.
struct Timestamp {
    std::uint32_t seconds = 0;

    Value to_value() const;
    static Timestamp from_value(const Value& v);

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

}  // namespace msauth
