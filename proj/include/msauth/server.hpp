#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>

#include "msauth/bytes.hpp"
#include "msauth/card.hpp"
#include "msauth/hash.hpp"
#include "msauth/ra.hpp"
#include "msauth/rng.hpp"
#include "msauth/wire.hpp"

namespace msauth {

// Verification toggles for fault-injection runs. Production defaults: all on.
// replay_cache is the strict variant: remembers (auth_tag, sent_at) pairs
// inside the freshness window and rejects verbatim re-deliveries, which the
// base protocol does not.
struct ServerPolicy {
    bool check_request_tag = true;
    bool check_request_freshness = true;
    bool replay_cache = false;
};

// Application server: verifies login requests against provisioned user keys
// and completes the key exchange. Sessions expire after
// session_lifetime_factor * threshold1 seconds.
class Server {
public:
    Server(ServerProvision provision, std::uint32_t threshold1_secs, ServerPolicy policy = {});

    // Secure-channel provisioning from the RA.
    void install_user(const UserProvision& provision);

    // Request verification, side-effect free on rejection. Recovers the user
    // id, nonce and salt, recomputes the tag and compares byte-exactly.
    // Exactly two hash invocations.
    struct PendingAuth {
        Value user_id;
        Value client_nonce;
        Value salt;
        Value session_binder;
        Value auth_tag;
        Timestamp request_sent_at;
    };
    PendingAuth verify_login(const LoginRequest& request, Timestamp now);

    // Picks the server nonce, derives the session key and builds the 44-byte
    // response. Exactly two hash invocations. Stores the session keyed by
    // user id (a repeat login overwrites).
    std::pair<LoginResponse, SessionKey> build_response(const PendingAuth& pending, Timestamp now,
                                                        RandomSource& rng);

    bool session_valid(const Value& user_id, Timestamp now) const;
    std::optional<SessionKey> session(const Value& user_id) const;

    const Value& id() const { return provision_.id; }
    const ServerProvision& provision() const { return provision_; }
    const std::map<Value, Value>& users() const { return users_; }
    std::uint32_t threshold1_secs() const { return threshold1_; }
    std::size_t user_count() const { return users_.size(); }
    bool knows_user(const Value& user_id) const { return users_.contains(user_id); }
    const Value& masked_user_key(const Value& user_id) const { return users_.at(user_id); }
    HashCounter& counter() { return counter_; }
    ServerPolicy& policy() { return policy_; }

    static constexpr std::uint32_t kSessionLifetimeFactor = 10;

private:
    ServerProvision provision_;
    std::uint32_t threshold1_;
    ServerPolicy policy_;
    std::map<Value, Value> users_;  // user id -> masked user key
    std::map<Value, SessionKey> sessions_;
    std::set<std::pair<Value, std::uint32_t>> seen_requests_;  // replay_cache only
    HashCounter counter_;
};

}  // namespace msauth
