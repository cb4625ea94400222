#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msauth/bytes.hpp"

namespace msauth {

// Login request, 84 bytes on the wire:
//   masked_id(8) | masked_nonce(32) | salt_blend(8) | auth_tag(32) | sent_at(4)
struct LoginRequest {
    Value masked_id;     // user id ^ server id
    Value masked_nonce;  // pad(client nonce) ^ user_key
    Value salt_blend;    // client nonce ^ salt ^ user id
    Value auth_tag;      // sha256 over request material and the session binder
    Timestamp sent_at;

    static constexpr std::size_t kWireSize = 84;
};

// Login response, 44 bytes on the wire:
//   nonce_blend(8) | auth_tag(32) | sent_at(4)
struct LoginResponse {
    Value nonce_blend;  // client nonce ^ server nonce ^ salt
    Value auth_tag;
    Timestamp sent_at;

    static constexpr std::size_t kWireSize = 44;
};

std::vector<std::uint8_t> encode(const LoginRequest& request);
std::vector<std::uint8_t> encode(const LoginResponse& response);
LoginRequest decode_request(std::span<const std::uint8_t> frame);
LoginResponse decode_response(std::span<const std::uint8_t> frame);

// One scripted manipulation of an in-flight frame. Scripts run in order:
// deliver/duplicate each emit one delivery at the current accumulated delay,
// record appends the current frame to the attacker capture, replace swaps the
// frame content, drop ends the frame's journey.
struct ChannelAction {
    enum class Kind { deliver, delay, drop, duplicate, replace, record };

    Kind kind = Kind::deliver;
    std::uint32_t delay_secs = 0;            // delay only
    std::vector<std::uint8_t> replacement;   // replace only

    static ChannelAction deliver() { return {Kind::deliver, 0, {}}; }
    static ChannelAction delay(std::uint32_t secs) { return {Kind::delay, secs, {}}; }
    static ChannelAction drop() { return {Kind::drop, 0, {}}; }
    static ChannelAction duplicate() { return {Kind::duplicate, 0, {}}; }
    static ChannelAction replace(std::vector<std::uint8_t> frame) {
        return {Kind::replace, 0, std::move(frame)};
    }
    static ChannelAction record() { return {Kind::record, 0, {}}; }
};

using ChannelScript = std::vector<ChannelAction>;

struct Delivery {
    std::vector<std::uint8_t> frame;
    std::uint32_t arrival_delay_secs = 0;
};

// Transcript of everything that crossed a channel. Secure-channel entries
// (registration traffic) are never exposed to scripts or attacker captures.
struct TranscriptEntry {
    std::uint32_t sim_time = 0;
    std::string direction;  // e.g. "card->server"
    bool secure = false;
    std::vector<std::uint8_t> frame;
};

class Transcript {
public:
    void add(TranscriptEntry entry) { entries_.push_back(std::move(entry)); }
    const std::vector<TranscriptEntry>& entries() const { return entries_; }
    std::size_t open_bytes() const;

    // Newline-delimited JSON records {direction, channel, frame, sim_time}.
    std::string dump() const;
    static Transcript parse(const std::string& dump);

private:
    std::vector<TranscriptEntry> entries_;
};

// Applies a script to one frame. Captured frames are appended to `capture`
// when the script records (capture may be null for honest runs).
std::vector<Delivery> transmit(std::span<const std::uint8_t> frame, const ChannelScript& script,
                               std::vector<std::vector<std::uint8_t>>* capture);

}  // namespace msauth
