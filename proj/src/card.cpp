#include "msauth/card.hpp"

#include <algorithm>

#include "msauth/errors.hpp"

namespace msauth {

bool IssuedCard::knows_server(const Value& server_id) const {
    return std::find(server_ids.begin(), server_ids.end(), server_id) != server_ids.end();
}

CardSession::CardSession(const IssuedCard& card, Value id, Value salt, Value pw_digest,
                         Value user_key)
    : card_(&card),
      id_(std::move(id)),
      salt_(std::move(salt)),
      pw_digest_(std::move(pw_digest)),
      user_key_(std::move(user_key)) {}

CardSession CardSession::local_verify(const IssuedCard& card, const Value& id,
                                      const Value& password, HashCounter& counter) {
    require_width(id, kIdWidth, "user id");
    if (password.empty())
        throw ProtocolError(Reject::weak_password, "empty password");

    Value id_pw_digest = sha256(concat({&id, &password}), counter);
    Value salt = truncate(xor_combine(id_pw_digest, card.masked_salt), kIdWidth);
    Value pw_digest = sha256(concat({&password, &salt}), counter);
    Value key_precursor =
        xor_combine(xor_combine(pw_digest, card.masked_key), pad(id, kDigestWidth));
    Value user_key = xor_combine(key_precursor, card.masked_salt);
    Value check = xor_combine(xor_combine(card.masked_salt, pw_digest), user_key);
    if (check != card.check_value)
        throw ProtocolError(Reject::credential_mismatch, "stored check value mismatch");

    CardSession session(card, id, std::move(salt), std::move(pw_digest), std::move(user_key));
    session.counter_ = &counter;
    return session;
}

LoginRequest CardSession::build_login_request(const Value& server_id, Timestamp now,
                                              RandomSource& rng) {
    require_width(server_id, kIdWidth, "server id");
    if (pending_)
        throw ProtocolError(Reject::login_in_progress, "one login in flight per card");
    if (!card_->knows_server(server_id))
        throw ProtocolError(Reject::unknown_server, "server not on card");

    Value nonce = rng.random_value(kIdWidth);
    Value sent_at = now.to_value();

    LoginRequest request;
    request.masked_id = xor_combine(id_, server_id);
    request.masked_nonce = xor_combine(pad(nonce, kDigestWidth), user_key_);
    Value binder = xor_combine(request.masked_nonce,
                               sha256(concat({&server_id, &nonce, &sent_at}), *counter_));
    request.salt_blend = xor_combine(xor_combine(nonce, salt_), id_);
    request.auth_tag = sha256(
        concat({&request.masked_nonce, &binder, &request.salt_blend, &salt_, &sent_at}), *counter_);
    request.sent_at = now;

    pending_ = PendingLogin{server_id, std::move(nonce), std::move(binder), request.auth_tag, now};
    return request;
}

SessionKey CardSession::verify_response(const LoginResponse& response, Timestamp now,
                                        std::uint32_t threshold2_secs,
                                        std::uint32_t threshold1_secs, CardPolicy policy) {
    if (!pending_)
        throw ProtocolError(Reject::no_pending_login, "no request in flight");
    PendingLogin pending = std::move(*pending_);
    pending_.reset();  // single shot: cleared whether this verification succeeds or not

    if (policy.check_response_freshness) {
        std::int64_t age =
            static_cast<std::int64_t>(now.seconds) - static_cast<std::int64_t>(response.sent_at.seconds);
        if (age < 0 || age > threshold2_secs)
            throw ProtocolError(Reject::stale_response, "response outside freshness window");
    }

    Value server_nonce =
        xor_combine(xor_combine(response.nonce_blend, pending.client_nonce), salt_);
    Value sent_at = response.sent_at.to_value();
    Value expected_tag =
        sha256(concat({&response.nonce_blend, &pending.client_nonce, &server_nonce,
                       &pending.auth_tag, &sent_at}),
               *counter_);
    if (policy.check_response_tag && expected_tag != response.auth_tag)
        throw ProtocolError(Reject::response_forgery, "response tag mismatch");

    Value window = Timestamp{threshold1_secs}.to_value();
    Value key = sha256(concat({&id_, &pending.server_id, &pending.client_nonce, &server_nonce,
                               &salt_, &pending.session_binder, &window}),
                       *counter_);
    return SessionKey{std::move(key), pending.server_id, now};
}

void update_password(IssuedCard& card, const Value& id, const Value& old_password,
                     const Value& new_password, HashCounter& counter) {
    if (new_password.empty())
        throw ProtocolError(Reject::weak_password, "empty replacement password");

    CardSession session = CardSession::local_verify(card, id, old_password, counter);

    Value id_pw_digest = sha256(concat({&id, &new_password}), counter);
    const Value& salt = session.salt();
    Value pw_digest = sha256(concat({&new_password, &salt}), counter);

    Value masked_salt = xor_combine(pad(salt, kDigestWidth), id_pw_digest);
    Value key_precursor = xor_combine(masked_salt, session.user_key());
    Value masked_key = xor_combine(xor_combine(key_precursor, pw_digest), pad(id, kDigestWidth));
    Value check_value = xor_combine(xor_combine(masked_salt, pw_digest), session.user_key());

    card.masked_salt = std::move(masked_salt);
    card.masked_key = std::move(masked_key);
    card.check_value = std::move(check_value);
}

}  // namespace msauth
