#pragma once

#include <optional>
#include <vector>

#include "msauth/bytes.hpp"
#include "msauth/hash.hpp"
#include "msauth/rng.hpp"
#include "msauth/wire.hpp"

namespace msauth {

/*
 * Card-side protocol state.
 *
 * The card stores three 32-byte values plus the enrolled server list:
 *
 *   masked_salt  = pad(salt) ^ sha256(id || pw)
 *   masked_key   = masked_salt ^ user_key ^ pw_digest ^ pad(id)
 *   check_value  = masked_salt ^ pw_digest ^ user_key
 *
 * where user_key is the RA-issued per-user secret and pw_digest =
 * sha256(pw || salt). Login round trip (open channel, all widths fixed):
 *
 *   card -> server   masked_id(8) | masked_nonce(32) | salt_blend(8) |
 *                    auth_tag(32) | sent_at(4)                      = 84 bytes
 *   server -> card   nonce_blend(8) | auth_tag(32) | sent_at(4)     = 44 bytes
 *
 * The card keeps the session binder (masked_nonce ^ sha256(sid||nonce||t1))
 * off the wire; both sides fold it into the session key, which makes the key
 * depend on a value no eavesdropper ever sees.
 *
 * Note the check_value comparison: recovering user_key from masked_key
 * consumes the same pw_digest term that check_value carries, so the two
 * cancel and the check reduces to masked_key ^ pad(id) == check_value. It
 * binds the entered identity, not the password; a wrong password surfaces
 * only when the server rejects the request tag.
 */

// Contents of an issued card. The credential values change only through
// update_password; the server roster grows as the authority announces new
// enrollments.
struct IssuedCard {
    Value masked_salt;   // 32 bytes
    Value masked_key;    // 32 bytes
    Value check_value;   // 32 bytes
    std::vector<Value> server_ids;  // 8 bytes each

    bool knows_server(const Value& server_id) const;
};

// Session key as either side derives it.
struct SessionKey {
    Value key;        // 32 bytes
    Value peer;       // 8 bytes: the other party's id
    Timestamp established_at;
};

// Verification toggles for fault-injection runs. Production defaults: all on.
struct CardPolicy {
    bool check_response_tag = true;
    bool check_response_freshness = true;
};

// One reader session: created by local_verify, consumed by a login exchange.
class CardSession {
public:
    // Recomputes the card's check value from the entered credentials and
    // compares byte-exactly. Exactly two hash invocations. Throws
    // credential_mismatch on a wrong id (see the header note: the check binds
    // the identity; a wrong password is caught by the server, not here).
    static CardSession local_verify(const IssuedCard& card, const Value& id,
                                    const Value& password, HashCounter& counter);

    // Builds the 84-byte login request for one enrolled server. One request
    // may be in flight at a time; the session binder and tag are retained for
    // response verification. Exactly two hash invocations.
    LoginRequest build_login_request(const Value& server_id, Timestamp now, RandomSource& rng);

    // Checks freshness and the response tag, then derives the session key.
    // threshold1 is the server-side request window; its 4-byte encoding is an
    // input to the key. Exactly two hash invocations. Clears the pending
    // login on success and on failure.
    SessionKey verify_response(const LoginResponse& response, Timestamp now,
                               std::uint32_t threshold2_secs, std::uint32_t threshold1_secs,
                               CardPolicy policy = {});

    bool login_pending() const { return pending_.has_value(); }
    const Value& salt() const { return salt_; }
    const Value& user_key() const { return user_key_; }

private:
    CardSession(const IssuedCard& card, Value id, Value salt, Value pw_digest, Value user_key);

    struct PendingLogin {
        Value server_id;
        Value client_nonce;
        Value session_binder;  // never transmitted
        Value auth_tag;
        Timestamp sent_at;
    };

    const IssuedCard* card_;
    Value id_;
    Value salt_;
    Value pw_digest_;
    Value user_key_;
    std::optional<PendingLogin> pending_;
    HashCounter* counter_ = nullptr;
};

// Re-derives the three stored values under a new password, in place. Salt and
// user key are preserved, so no server-side state changes. Exactly four hash
// invocations (two to verify, two for the new credentials). No message leaves
// the reader. The old-password check inherits local_verify's identity-only
// binding: a wrong old password with a correct id is NOT detected and yields
// a card the server will no longer accept.
void update_password(IssuedCard& card, const Value& id, const Value& old_password,
                     const Value& new_password, HashCounter& counter);

}  // namespace msauth
