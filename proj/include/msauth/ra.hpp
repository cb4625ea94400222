#pragma once

#include <map>
#include <vector>

#include "msauth/bytes.hpp"
#include "msauth/card.hpp"
#include "msauth/hash.hpp"
#include "msauth/rng.hpp"

namespace msauth {

// What the RA hands a server at enrollment. masked_digest differs from the
// digest by the padded server id, so either party can recover the id from the
// pair without storing it separately.
struct ServerProvision {
    Value id;             // 8 bytes
    Value digest;         // 32 bytes, server-chosen credential digest
    Value masked_digest;  // digest ^ pad(id)
};

// Per-user value pushed to every server: pad(user id) ^ user_key. The server
// recovers the user key by XORing the padded id back out.
struct UserProvision {
    Value user_id;          // 8 bytes
    Value masked_user_key;  // 32 bytes
};

// What the user submits over the secure registration channel. The salt stays
// on the user side and is never sent; it is recoverable from masked_salt with
// the password.
struct UserEnrollment {
    Value id;           // 8 bytes
    Value masked_salt;  // 32 bytes: pad(salt) ^ sha256(id || pw)
    Value pw_digest;    // 32 bytes: sha256(pw || salt)
};

struct IssuedCard;  // defined in card.hpp

// User-side half of registration: picks a salt and derives the two values the
// RA needs. Exactly two hash invocations.
UserEnrollment prepare_enrollment(const Value& id, const Value& password, RandomSource& rng,
                                  HashCounter& counter);

// Registration authority: holds the master secret, enrolls servers and users,
// and derives card contents. The per-user issue nonce is hashed into the user
// key and then dropped; nothing here can return it.
class RegistrationAuthority {
public:
    explicit RegistrationAuthority(Value master_secret);

    // Rebuild from persisted state.
    static RegistrationAuthority restore(Value master_secret, std::vector<ServerProvision> servers,
                                         std::vector<UserProvision> users);

    // Server enrollment: caller supplies the credential digest it computed
    // from its own identity, password and secret. No hashing happens here.
    ServerProvision enroll_server(const Value& server_id, const Value& digest);

    // User enrollment: derives card contents and the per-server provision.
    // Exactly one hash invocation (the user key).
    struct EnrollmentResult {
        IssuedCard card;
        UserProvision provision;
    };
    EnrollmentResult enroll_user(const UserEnrollment& enrollment, RandomSource& rng);

    const Value& master_secret() const { return master_secret_; }
    const std::vector<ServerProvision>& servers() const { return servers_; }
    // Snapshot for servers enrolled after some users already exist.
    const std::vector<UserProvision>& user_provisions() const { return user_provisions_; }
    HashCounter& counter() { return counter_; }

private:
    Value master_secret_;
    std::vector<ServerProvision> servers_;
    std::vector<UserProvision> user_provisions_;
    std::map<Value, std::size_t> server_index_;
    std::map<Value, std::size_t> user_index_;
    HashCounter counter_;
};

// Server-side credential digest: sha256(id || password || secret). Computed by
// the server itself before enrollment; counted against the server's tally.
Value server_credential_digest(const Value& server_id, const Value& password,
                               const Value& server_secret, HashCounter& counter);

}  // namespace msauth
