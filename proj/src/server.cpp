#include "msauth/server.hpp"

#include "msauth/errors.hpp"

namespace msauth {

Server::Server(ServerProvision provision, std::uint32_t threshold1_secs, ServerPolicy policy)
    : provision_(std::move(provision)), threshold1_(threshold1_secs), policy_(policy) {
    require_width(provision_.id, kIdWidth, "server id");
    require_width(provision_.digest, kDigestWidth, "credential digest");
    require_width(provision_.masked_digest, kDigestWidth, "masked credential digest");
}

void Server::install_user(const UserProvision& provision) {
    require_width(provision.user_id, kIdWidth, "user id");
    require_width(provision.masked_user_key, kDigestWidth, "masked user key");
    if (users_.contains(provision.user_id))
        throw ProtocolError(Reject::duplicate_identity, "user already provisioned");
    users_[provision.user_id] = provision.masked_user_key;
}

Server::PendingAuth Server::verify_login(const LoginRequest& request, Timestamp now) {
    require_width(request.masked_id, kIdWidth, "masked id");
    require_width(request.masked_nonce, kDigestWidth, "masked nonce");
    require_width(request.salt_blend, kIdWidth, "salt blend");
    require_width(request.auth_tag, kDigestWidth, "auth tag");

    if (policy_.check_request_freshness) {
        std::int64_t age =
            static_cast<std::int64_t>(now.seconds) - static_cast<std::int64_t>(request.sent_at.seconds);
        if (age < 0 || age > threshold1_)
            throw ProtocolError(Reject::stale_request, "request outside freshness window");
    }
    if (policy_.replay_cache &&
        seen_requests_.contains({request.auth_tag, request.sent_at.seconds}))
        throw ProtocolError(Reject::replayed_request, "tag already seen in window");

    // The digest pair differs by the padded server id, so XORing both against
    // the masked id leaves the padded user id.
    Value user_id = truncate(
        xor_combine(xor_combine(provision_.masked_digest, pad(request.masked_id, kDigestWidth)),
                    provision_.digest),
        kIdWidth);
    auto entry = users_.find(user_id);
    if (entry == users_.end())
        throw ProtocolError(Reject::unknown_user, "no provision for recovered id");
    const Value& masked_user_key = entry->second;

    Value client_nonce = truncate(
        xor_combine(xor_combine(masked_user_key, request.masked_nonce), pad(user_id, kDigestWidth)),
        kIdWidth);
    Value sent_at = request.sent_at.to_value();
    Value binder = xor_combine(
        request.masked_nonce, sha256(concat({&provision_.id, &client_nonce, &sent_at}), counter_));
    Value salt = xor_combine(xor_combine(client_nonce, user_id), request.salt_blend);
    Value expected_tag = sha256(
        concat({&request.masked_nonce, &binder, &request.salt_blend, &salt, &sent_at}), counter_);
    if (policy_.check_request_tag && expected_tag != request.auth_tag)
        throw ProtocolError(Reject::request_forgery, "request tag mismatch");

    if (policy_.replay_cache)
        seen_requests_.insert({request.auth_tag, request.sent_at.seconds});

    return PendingAuth{std::move(user_id), std::move(client_nonce), std::move(salt),
                       std::move(binder),  std::move(expected_tag), request.sent_at};
}

std::pair<LoginResponse, SessionKey> Server::build_response(const PendingAuth& pending,
                                                            Timestamp now, RandomSource& rng) {
    Value server_nonce = rng.random_value(kIdWidth);

    LoginResponse response;
    response.nonce_blend =
        xor_combine(xor_combine(pending.client_nonce, server_nonce), pending.salt);
    Value sent_at = now.to_value();
    response.auth_tag = sha256(concat({&response.nonce_blend, &pending.client_nonce, &server_nonce,
                                       &pending.auth_tag, &sent_at}),
                               counter_);
    response.sent_at = now;

    Value window = Timestamp{threshold1_}.to_value();
    Value key = sha256(concat({&pending.user_id, &provision_.id, &pending.client_nonce,
                               &server_nonce, &pending.salt, &pending.session_binder, &window}),
                       counter_);
    SessionKey session{std::move(key), pending.user_id, now};
    sessions_[pending.user_id] = session;
    return {std::move(response), std::move(session)};
}

bool Server::session_valid(const Value& user_id, Timestamp now) const {
    auto it = sessions_.find(user_id);
    if (it == sessions_.end()) return false;
    std::int64_t age = static_cast<std::int64_t>(now.seconds) -
                       static_cast<std::int64_t>(it->second.established_at.seconds);
    return age >= 0 && age <= static_cast<std::int64_t>(kSessionLifetimeFactor) * threshold1_;
}

std::optional<SessionKey> Server::session(const Value& user_id) const {
    auto it = sessions_.find(user_id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
}

}  // namespace msauth
