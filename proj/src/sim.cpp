#include "msauth/sim.hpp"

#include "msauth/errors.hpp"

namespace msauth {

World::World(const WorldConfig& config)
    : config_(config), clock_(config.epoch), rng_(config.seed) {
    ra_ = std::make_unique<RegistrationAuthority>(rng_.random_value(kIdWidth));
}

Server& World::register_server(const Value& server_id, const Value& password) {
    Value server_secret = rng_.random_value(kIdWidth);
    HashCounter enrollment_hashes;
    Value digest = server_credential_digest(server_id, password, server_secret, enrollment_hashes);

    std::vector<std::uint8_t> enrollment_frame = concat({&server_id, &digest});
    transcript_.add({clock_.now(), "server->ra", true, std::move(enrollment_frame)});
    ServerProvision provision = ra_->enroll_server(server_id, digest);
    std::vector<std::uint8_t> provision_frame = concat({&provision.id, &provision.masked_digest});
    transcript_.add({clock_.now(), "ra->server", true, std::move(provision_frame)});

    auto server = std::make_unique<Server>(provision, config_.threshold1_secs, config_.server_policy);
    server->counter().invocations += enrollment_hashes.invocations;
    // Late joiner: receives every existing user provision as a snapshot.
    for (const UserProvision& up : ra_->user_provisions()) {
        server->install_user(up);
        transcript_.add({clock_.now(), "ra->server", true, concat({&up.user_id, &up.masked_user_key})});
    }
    auto [it, inserted] = servers_.emplace(server_id, std::move(server));
    if (!inserted)
        throw ProtocolError(Reject::duplicate_identity, "server already in world");
    // Existing cards learn the newcomer over the secure channel, mirroring the
    // user-provision snapshot above: enroll once, reach every server.
    for (auto& [user_id, card] : cards_) {
        if (!card.knows_server(server_id)) {
            card.server_ids.push_back(server_id);
            transcript_.add({clock_.now(), "ra->user", true, server_id.vec()});
        }
    }
    return *it->second;
}

IssuedCard& World::register_user(const Value& user_id, const Value& password) {
    UserEnrollment enrollment = prepare_enrollment(user_id, password, rng_, user_counter_);
    transcript_.add({clock_.now(), "user->ra", true,
                     concat({&enrollment.id, &enrollment.masked_salt, &enrollment.pw_digest})});
    RegistrationAuthority::EnrollmentResult result = ra_->enroll_user(enrollment, rng_);
    for (auto& [sid, server] : servers_) {
        server->install_user(result.provision);
        transcript_.add({clock_.now(), "ra->server", true,
                         concat({&result.provision.user_id, &result.provision.masked_user_key})});
    }
    transcript_.add({clock_.now(), "ra->user", true,
                     concat({&result.card.masked_salt, &result.card.masked_key,
                             &result.card.check_value})});
    auto [it, inserted] = cards_.emplace(user_id, std::move(result.card));
    if (!inserted)
        throw ProtocolError(Reject::duplicate_identity, "card already issued");
    return it->second;
}

Server& World::server(const Value& id) {
    auto it = servers_.find(id);
    if (it == servers_.end())
        throw ProtocolError(Reject::unknown_server, "no such server in world");
    return *it->second;
}

IssuedCard& World::card(const Value& user_id) {
    auto it = cards_.find(user_id);
    if (it == cards_.end())
        throw ProtocolError(Reject::unknown_user, "no card issued for user");
    return it->second;
}

std::uint64_t World::server_side_hashes() const {
    std::uint64_t total = 0;
    for (const auto& [id, server] : servers_) total += server->counter().invocations;
    return total;
}

World::AuthOutcome World::login(const Value& user_id, const Value& password,
                                const Value& server_id, const ChannelScript& request_script,
                                const ChannelScript& response_script) {
    Server& target = server(server_id);
    CardSession session =
        CardSession::local_verify(card(user_id), user_id, password, user_counter_);

    LoginRequest request =
        session.build_login_request(server_id, clock_.read(config_.card_skew_secs), rng_);
    std::vector<std::uint8_t> request_frame = encode(request);
    transcript_.add({clock_.now(), "card->server", false, request_frame});

    std::optional<AuthOutcome> outcome;
    std::optional<ProtocolError> first_rejection;
    std::size_t extra_acceptances = 0;
    std::size_t ignored_responses = 0;

    std::uint32_t send_time = clock_.now();
    for (const Delivery& delivery : transmit(request_frame, request_script, &captured_)) {
        if (send_time + delivery.arrival_delay_secs > clock_.now())
            clock_.advance(send_time + delivery.arrival_delay_secs - clock_.now());
        try {
            LoginRequest received = decode_request(delivery.frame);
            Server::PendingAuth pending =
                target.verify_login(received, clock_.read(config_.server_skew_secs));
            auto [response, server_key] =
                target.build_response(pending, clock_.read(config_.server_skew_secs), rng_);
            if (outcome) {
                ++extra_acceptances;
                continue;  // duplicate in-window acceptance; measured, response goes nowhere
            }

            std::vector<std::uint8_t> response_frame = encode(response);
            transcript_.add({clock_.now(), "server->card", false, response_frame});
            std::uint32_t response_send_time = clock_.now();
            for (const Delivery& reply : transmit(response_frame, response_script, &captured_)) {
                if (response_send_time + reply.arrival_delay_secs > clock_.now())
                    clock_.advance(response_send_time + reply.arrival_delay_secs - clock_.now());
                try {
                    LoginResponse received_response = decode_response(reply.frame);
                    SessionKey card_key = session.verify_response(
                        received_response, clock_.read(config_.card_skew_secs),
                        config_.threshold2_secs, config_.threshold1_secs, config_.card_policy);
                    AuthOutcome out;
                    out.card_key = std::move(card_key);
                    out.server_key = server_key;
                    out.request_bytes = request_frame.size();
                    out.response_bytes = response_frame.size();
                    out.request = request;
                    out.response = response;
                    outcome = std::move(out);
                } catch (const ProtocolError& e) {
                    if (e.code() == Reject::no_pending_login)
                        ++ignored_responses;
                    else if (!first_rejection)
                        first_rejection = e;
                }
            }
        } catch (const ProtocolError& e) {
            if (!first_rejection) first_rejection = e;
        }
    }

    if (!outcome) {
        if (first_rejection) throw *first_rejection;
        throw ProtocolError(Reject::malformed_frame, "no delivery reached the server");
    }
    outcome->extra_server_acceptances = extra_acceptances;
    outcome->ignored_responses = ignored_responses;
    return *outcome;
}

void World::update_user_password(const Value& user_id, const Value& old_password,
                                 const Value& new_password) {
    update_password(card(user_id), user_id, old_password, new_password, user_counter_);
}

}  // namespace msauth
