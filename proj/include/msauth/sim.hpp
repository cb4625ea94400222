#pragma once

#include <map>
#include <memory>
#include <optional>

#include "msauth/bytes.hpp"
#include "msauth/card.hpp"
#include "msauth/ra.hpp"
#include "msauth/rng.hpp"
#include "msauth/server.hpp"
#include "msauth/wire.hpp"

namespace msauth {

// One logical clock; each actor reads it through its own skew.
class SimClock {
public:
    explicit SimClock(std::uint32_t epoch) : now_(epoch) {}

    Timestamp read(std::int32_t skew_secs) const {
        return Timestamp{static_cast<std::uint32_t>(static_cast<std::int64_t>(now_) + skew_secs)};
    }
    void advance(std::uint32_t secs) { now_ += secs; }
    std::uint32_t now() const { return now_; }

private:
    std::uint32_t now_;
};

struct WorldConfig {
    std::uint64_t seed = 1;
    std::uint32_t epoch = 1'700'000'000;
    std::uint32_t threshold1_secs = 5;  // request freshness window; its encoding enters the key
    std::uint32_t threshold2_secs = 5;  // response freshness window
    std::int32_t card_skew_secs = 0;
    std::int32_t server_skew_secs = 0;
    ServerPolicy server_policy;
    CardPolicy card_policy;
};

// In-memory deployment: one RA, any number of servers, users and cards, a
// shared clock and a seeded randomness source. Every open-channel frame is
// logged; secure registration traffic is logged but never exposed to scripts.
class World {
public:
    explicit World(const WorldConfig& config);

    // Enrolls a server: the server derives its credential digest from a fresh
    // secret, the RA masks it, and provisioned users are snapshotted over.
    Server& register_server(const Value& server_id, const Value& password);

    // Enrolls a user and issues the card; the per-user key lands on every
    // registered server over the secure channel.
    IssuedCard& register_user(const Value& user_id, const Value& password);

    struct AuthOutcome {
        SessionKey card_key;
        SessionKey server_key;
        std::size_t request_bytes = 0;
        std::size_t response_bytes = 0;
        LoginRequest request;
        LoginResponse response;
        std::size_t extra_server_acceptances = 0;  // duplicate deliveries accepted in-window
        std::size_t ignored_responses = 0;         // responses with no pending login to match
    };
    // Full login round trip through scripted channels. Throws the first
    // rejection if no session key is established.
    AuthOutcome login(const Value& user_id, const Value& password, const Value& server_id,
                      const ChannelScript& request_script = {ChannelAction::deliver()},
                      const ChannelScript& response_script = {ChannelAction::deliver()});

    void update_user_password(const Value& user_id, const Value& old_password,
                              const Value& new_password);

    RegistrationAuthority& ra() { return *ra_; }
    Server& server(const Value& id);
    IssuedCard& card(const Value& user_id);
    SimClock& clock() { return clock_; }
    SeededRng& rng() { return rng_; }
    Transcript& transcript() { return transcript_; }
    std::vector<std::vector<std::uint8_t>>& captured() { return captured_; }
    HashCounter& user_side_counter() { return user_counter_; }
    const WorldConfig& config() const { return config_; }
    std::uint64_t server_side_hashes() const;

private:
    WorldConfig config_;
    SimClock clock_;
    SeededRng rng_;
    std::unique_ptr<RegistrationAuthority> ra_;
    std::map<Value, std::unique_ptr<Server>> servers_;
    std::map<Value, IssuedCard> cards_;
    Transcript transcript_;
    std::vector<std::vector<std::uint8_t>> captured_;
    HashCounter user_counter_;  // card/reader side, including enrollment prep
};

}  // namespace msauth
