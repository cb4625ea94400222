#include "msauth/wire.hpp"

#include "json.hpp"
#include <sstream>

#include "msauth/errors.hpp"

namespace msauth {

namespace {

void append(std::vector<std::uint8_t>& out, const Value& v) {
    out.insert(out.end(), v.bytes().begin(), v.bytes().end());
}

Value slice(std::span<const std::uint8_t> frame, std::size_t offset, std::size_t len) {
    return Value(std::vector<std::uint8_t>(frame.begin() + static_cast<std::ptrdiff_t>(offset),
                                           frame.begin() + static_cast<std::ptrdiff_t>(offset + len)));
}

}  // namespace

std::vector<std::uint8_t> encode(const LoginRequest& request) {
    require_width(request.masked_id, kIdWidth, "masked id");
    require_width(request.masked_nonce, kDigestWidth, "masked nonce");
    require_width(request.salt_blend, kIdWidth, "salt blend");
    require_width(request.auth_tag, kDigestWidth, "auth tag");
    std::vector<std::uint8_t> out;
    out.reserve(LoginRequest::kWireSize);
    append(out, request.masked_id);
    append(out, request.masked_nonce);
    append(out, request.salt_blend);
    append(out, request.auth_tag);
    append(out, request.sent_at.to_value());
    return out;
}

std::vector<std::uint8_t> encode(const LoginResponse& response) {
    require_width(response.nonce_blend, kIdWidth, "nonce blend");
    require_width(response.auth_tag, kDigestWidth, "auth tag");
    std::vector<std::uint8_t> out;
    out.reserve(LoginResponse::kWireSize);
    append(out, response.nonce_blend);
    append(out, response.auth_tag);
    append(out, response.sent_at.to_value());
    return out;
}

LoginRequest decode_request(std::span<const std::uint8_t> frame) {
    if (frame.size() != LoginRequest::kWireSize)
        throw ProtocolError(Reject::malformed_frame, "login request must be 84 bytes");
    LoginRequest request;
    request.masked_id = slice(frame, 0, kIdWidth);
    request.masked_nonce = slice(frame, 8, kDigestWidth);
    request.salt_blend = slice(frame, 40, kIdWidth);
    request.auth_tag = slice(frame, 48, kDigestWidth);
    request.sent_at = Timestamp::from_value(slice(frame, 80, kTimestampWidth));
    return request;
}

LoginResponse decode_response(std::span<const std::uint8_t> frame) {
    if (frame.size() != LoginResponse::kWireSize)
        throw ProtocolError(Reject::malformed_frame, "login response must be 44 bytes");
    LoginResponse response;
    response.nonce_blend = slice(frame, 0, kIdWidth);
    response.auth_tag = slice(frame, 8, kDigestWidth);
    response.sent_at = Timestamp::from_value(slice(frame, 40, kTimestampWidth));
    return response;
}

std::size_t Transcript::open_bytes() const {
    std::size_t total = 0;
    for (const TranscriptEntry& e : entries_)
        if (!e.secure) total += e.frame.size();
    return total;
}

std::string Transcript::dump() const {
    std::ostringstream out;
    for (const TranscriptEntry& e : entries_) {
        nlohmann::json record = {
            {"direction", e.direction},
            {"channel", e.secure ? "secure" : "open"},
            {"frame", Value(e.frame).hex()},
            {"sim_time", e.sim_time},
        };
        out << record.dump() << '\n';
    }
    return out.str();
}

Transcript Transcript::parse(const std::string& dump) {
    Transcript t;
    std::istringstream in(dump);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line);
        TranscriptEntry e;
        e.direction = record.at("direction").get<std::string>();
        e.secure = record.at("channel").get<std::string>() == "secure";
        e.frame = Value::from_hex(record.at("frame").get<std::string>()).vec();
        e.sim_time = record.at("sim_time").get<std::uint32_t>();
        t.add(std::move(e));
    }
    return t;
}

std::vector<Delivery> transmit(std::span<const std::uint8_t> frame, const ChannelScript& script,
                               std::vector<std::vector<std::uint8_t>>* capture) {
    std::vector<Delivery> deliveries;
    std::vector<std::uint8_t> current(frame.begin(), frame.end());
    std::uint32_t delay = 0;
    for (const ChannelAction& action : script) {
        switch (action.kind) {
            case ChannelAction::Kind::deliver:
            case ChannelAction::Kind::duplicate:
                deliveries.push_back(Delivery{current, delay});
                break;
            case ChannelAction::Kind::delay:
                delay += action.delay_secs;
                break;
            case ChannelAction::Kind::drop:
                return deliveries;
            case ChannelAction::Kind::replace:
                current = action.replacement;
                break;
            case ChannelAction::Kind::record:
                if (capture) capture->push_back(current);
                break;
        }
    }
    return deliveries;
}

}  // namespace msauth
