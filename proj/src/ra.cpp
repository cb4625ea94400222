#include "msauth/ra.hpp"

#include "msauth/card.hpp"
#include "msauth/errors.hpp"

namespace msauth {

UserEnrollment prepare_enrollment(const Value& id, const Value& password, RandomSource& rng,
                                  HashCounter& counter) {
    require_width(id, kIdWidth, "user id");
    if (password.empty())
        throw ProtocolError(Reject::weak_password, "empty password");

    Value salt = rng.random_value(kIdWidth);
    Value id_pw_digest = sha256(concat({&id, &password}), counter);
    Value masked_salt = xor_combine(pad(salt, kDigestWidth), id_pw_digest);
    Value pw_digest = sha256(concat({&password, &salt}), counter);
    return UserEnrollment{id, std::move(masked_salt), std::move(pw_digest)};
}

Value server_credential_digest(const Value& server_id, const Value& password,
                               const Value& server_secret, HashCounter& counter) {
    require_width(server_id, kIdWidth, "server id");
    require_width(server_secret, kIdWidth, "server secret");
    if (password.empty())
        throw ProtocolError(Reject::weak_password, "empty server password");
    return sha256(concat({&server_id, &password, &server_secret}), counter);
}

RegistrationAuthority::RegistrationAuthority(Value master_secret)
    : master_secret_(std::move(master_secret)) {
    require_width(master_secret_, kIdWidth, "master secret");
}

RegistrationAuthority RegistrationAuthority::restore(Value master_secret,
                                                     std::vector<ServerProvision> servers,
                                                     std::vector<UserProvision> users) {
    RegistrationAuthority ra(std::move(master_secret));
    for (ServerProvision& s : servers) {
        ra.server_index_[s.id] = ra.servers_.size();
        ra.servers_.push_back(std::move(s));
    }
    for (UserProvision& u : users) {
        ra.user_index_[u.user_id] = ra.user_provisions_.size();
        ra.user_provisions_.push_back(std::move(u));
    }
    return ra;
}

ServerProvision RegistrationAuthority::enroll_server(const Value& server_id, const Value& digest) {
    require_width(server_id, kIdWidth, "server id");
    require_width(digest, kDigestWidth, "credential digest");
    if (server_index_.contains(server_id))
        throw ProtocolError(Reject::duplicate_identity, "server already enrolled");

    ServerProvision provision{server_id, digest, xor_combine(digest, pad(server_id, kDigestWidth))};
    server_index_[server_id] = servers_.size();
    servers_.push_back(provision);
    return provision;
}

RegistrationAuthority::EnrollmentResult RegistrationAuthority::enroll_user(
    const UserEnrollment& enrollment, RandomSource& rng) {
    require_width(enrollment.id, kIdWidth, "user id");
    require_width(enrollment.masked_salt, kDigestWidth, "masked salt");
    require_width(enrollment.pw_digest, kDigestWidth, "password digest");
    if (user_index_.contains(enrollment.id))
        throw ProtocolError(Reject::duplicate_identity, "user already enrolled");

    // The issue nonce exists only inside this scope; the user key is the only
    // durable trace of it.
    Value issue_nonce = rng.random_value(kIdWidth);
    Value user_key = sha256(concat({&issue_nonce, &master_secret_}), counter_);

    Value key_precursor = xor_combine(enrollment.masked_salt, user_key);
    Value masked_key =
        xor_combine(xor_combine(key_precursor, enrollment.pw_digest), pad(enrollment.id, kDigestWidth));
    Value check_value = xor_combine(xor_combine(enrollment.masked_salt, enrollment.pw_digest), user_key);
    Value masked_user_key =
        xor_combine(xor_combine(pad(enrollment.id, kDigestWidth), enrollment.masked_salt), key_precursor);

    IssuedCard card;
    card.masked_salt = enrollment.masked_salt;
    card.masked_key = std::move(masked_key);
    card.check_value = std::move(check_value);
    for (const ServerProvision& s : servers_) card.server_ids.push_back(s.id);

    UserProvision provision{enrollment.id, std::move(masked_user_key)};
    user_index_[enrollment.id] = user_provisions_.size();
    user_provisions_.push_back(provision);
    return EnrollmentResult{std::move(card), std::move(provision)};
}

}  // namespace msauth
