#include "msauth/scenario.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "json.hpp"

#include "msauth/errors.hpp"
#include "msauth/hash.hpp"
#include "msauth/server.hpp"
#include "msauth/sim.hpp"

namespace msauth {

namespace {

Value digest_of(std::initializer_list<const Value*> parts) { return sha256(concat(parts)); }

void require(bool condition, const char* what) {
    if (!condition) {
        throw std::logic_error(std::string("scenario fixture broken: ") + what);
    }
}

Value flip_byte(const Value& v, std::size_t index) {
    std::vector<std::uint8_t> bytes(v.vec());
    bytes.at(index) ^= 0x01;
    return Value(std::move(bytes));
}

// The protocol's randomness source only deals in id-width draws; adversary
// scripts occasionally want wider junk values.
Value random_wide(RandomSource& rng, std::size_t width) {
    std::vector<std::uint8_t> bytes;
    while (bytes.size() < width) {
        const Value draw = rng.random_value(kIdWidth);
        bytes.insert(bytes.end(), draw.bytes().begin(), draw.bytes().end());
    }
    bytes.resize(width);
    return Value(std::move(bytes));
}

}  // namespace

HonestRun make_honest_run(std::uint64_t seed) {
    WorldConfig config;
    config.seed = seed;
    World world(config);

    HonestRun run;
    run.seed = seed;
    run.threshold1_secs = config.threshold1_secs;
    run.threshold2_secs = config.threshold2_secs;
    run.user_id = Value::from_hex("0102030405060708");
    run.insider_id = Value::from_hex("909192939495969f");
    run.server_id = Value::from_hex("1112131415161718");
    run.password = Value::from_text("correct horse");
    run.insider_password = Value::from_text("tragic kingdom");

    world.register_server(run.server_id, Value::from_text("relay credential"));
    run.card = world.register_user(run.user_id, run.password);
    run.insider_card = world.register_user(run.insider_id, run.insider_password);

    // One-second transit each way keeps the honest exchange non-degenerate:
    // the response carries a later timestamp than the request it answers.
    World::AuthOutcome outcome = world.login(
        run.user_id, run.password, run.server_id,
        {ChannelAction::delay(1), ChannelAction::deliver()},
        {ChannelAction::delay(1), ChannelAction::deliver()});
    run.request = outcome.request;
    run.response = outcome.response;
    run.session_key = outcome.card_key.key;

    Server& server = world.server(run.server_id);
    run.server_provision = server.provision();
    run.masked_user_key = server.masked_user_key(run.user_id);
    run.insider_masked_user_key = server.masked_user_key(run.insider_id);

    // Ground truth, recomputed the way the parties themselves recover it
    // rather than copied out of private actor state.
    const Value id_digest = digest_of({&run.user_id, &run.password});
    run.salt = truncate(xor_combine(run.card.masked_salt, id_digest), kIdWidth);
    run.user_key = xor_combine(run.masked_user_key, pad(run.user_id, kDigestWidth));
    run.client_nonce = truncate(xor_combine(run.request.masked_nonce, run.user_key), kIdWidth);
    const Value t1 = run.request.sent_at.to_value();
    run.session_binder = xor_combine(run.request.masked_nonce,
                                     digest_of({&run.server_id, &run.client_nonce, &t1}));
    run.server_nonce =
        xor_combine(xor_combine(run.response.nonce_blend, run.client_nonce), run.salt);

    const Value insider_digest = digest_of({&run.insider_id, &run.insider_password});
    run.insider_salt =
        truncate(xor_combine(run.insider_card.masked_salt, insider_digest), kIdWidth);
    run.insider_user_key =
        xor_combine(run.insider_masked_user_key, pad(run.insider_id, kDigestWidth));
    return run;
}

const char* to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::stolen_card: return "stolen-card";
        case ScenarioId::impersonation: return "impersonation";
        case ScenarioId::password_guessing: return "password-guessing";
        case ScenarioId::replay: return "replay";
        case ScenarioId::key_disclosure: return "key-disclosure";
        case ScenarioId::mitm_tamper: return "mitm-tamper";
        case ScenarioId::insider: return "insider";
    }
    return "unknown";
}

std::vector<ScenarioId> all_scenarios() {
    return {ScenarioId::stolen_card,   ScenarioId::impersonation, ScenarioId::password_guessing,
            ScenarioId::replay,        ScenarioId::key_disclosure, ScenarioId::mitm_tamper,
            ScenarioId::insider};
}

const char* to_string(Mutation mutation) {
    switch (mutation) {
        case Mutation::none: return "none";
        case Mutation::skip_request_tag: return "skip-request-tag";
        case Mutation::skip_response_tag: return "skip-response-tag";
        case Mutation::skip_freshness: return "skip-freshness";
    }
    return "unknown";
}

namespace {

// Everything a passive observer of the open channel holds, plus the
// protocol's public hash shapes instantiated with this run's true values.
KnowledgeSet transcript_knowledge(const HonestRun& run) {
    KnowledgeSet k;
    k.grant("masked_id", run.request.masked_id);
    k.grant("masked_nonce", run.request.masked_nonce);
    k.grant("salt_blend", run.request.salt_blend);
    k.grant("request_tag", run.request.auth_tag);
    k.grant("request_time", run.request.sent_at.to_value());
    k.grant("nonce_blend", run.response.nonce_blend);
    k.grant("response_tag", run.response.auth_tag);
    k.grant("response_time", run.response.sent_at.to_value());
    // Deployment parameter, published alongside the protocol.
    k.grant("freshness_window", Timestamp{run.threshold1_secs}.to_value());

    const Value t1 = run.request.sent_at.to_value();
    const Value t2 = run.response.sent_at.to_value();
    const Value window = Timestamp{run.threshold1_secs}.to_value();
    k.add_shape({"id_password_digest",
                 {run.user_id, run.password},
                 digest_of({&run.user_id, &run.password})});
    k.add_shape({"password_salt_digest",
                 {run.password, run.salt},
                 digest_of({&run.password, &run.salt})});
    k.add_shape({"binder_digest",
                 {run.server_id, run.client_nonce, t1},
                 digest_of({&run.server_id, &run.client_nonce, &t1})});
    k.add_shape({"request_tag_digest",
                 {run.request.masked_nonce, run.session_binder, run.request.salt_blend, run.salt,
                  t1},
                 run.request.auth_tag});
    k.add_shape({"response_tag_digest",
                 {run.response.nonce_blend, run.client_nonce, run.server_nonce,
                  run.request.auth_tag, t2},
                 run.response.auth_tag});
    k.add_shape({"session_key_digest",
                 {run.user_id, run.server_id, run.client_nonce, run.server_nonce, run.salt,
                  run.session_binder, window},
                 run.session_key});
    return k;
}

void grant_card(KnowledgeSet& k, const IssuedCard& card, const std::string& prefix) {
    k.grant(prefix + "masked_salt", card.masked_salt);
    k.grant(prefix + "masked_key", card.masked_key);
    k.grant(prefix + "check_value", card.check_value);
}

std::vector<GoalResult> evaluate_goals(const KnowledgeSet& k, const HonestRun& run) {
    auto goal = [&](const char* name, const Value& bytes) {
        GoalResult g{name, k.derivable(bytes), ""};
        if (g.derivable) {
            if (auto w = k.witness(bytes)) {
                g.witness = w->str();
            }
        }
        return g;
    };
    return {goal("session_key", run.session_key), goal("salt", run.salt),
            goal("client_nonce", run.client_nonce), goal("user_key", run.user_key)};
}

void note_observations(const KnowledgeSet& k, const HonestRun& run,
                       std::vector<std::string>& out) {
    if (k.derivable(run.server_nonce)) {
        out.push_back("server nonce is computable from public values: " +
                      k.witness(run.server_nonce)->str());
    }
    if (k.derivable(run.session_binder)) {
        out.push_back("session binder is computable from public values: " +
                      k.witness(run.session_binder)->str());
    }
}

ServerPolicy server_policy_for(Mutation m) {
    ServerPolicy p;
    if (m == Mutation::skip_request_tag) {
        p.check_request_tag = false;
    }
    if (m == Mutation::skip_freshness) {
        p.check_request_freshness = false;
    }
    return p;
}

CardPolicy card_policy_for(Mutation m) {
    CardPolicy p;
    if (m == Mutation::skip_response_tag) {
        p.check_response_tag = false;
    }
    if (m == Mutation::skip_freshness) {
        p.check_response_freshness = false;
    }
    return p;
}

Server make_server(const HonestRun& run, Mutation m, bool replay_cache = false) {
    ServerPolicy policy = server_policy_for(m);
    policy.replay_cache = replay_cache;
    Server server(run.server_provision, run.threshold1_secs, policy);
    server.install_user({run.user_id, run.masked_user_key});
    server.install_user({run.insider_id, run.insider_masked_user_key});
    return server;
}

ScriptResult try_request(const std::string& name, Server& server, const LoginRequest& request,
                         std::uint32_t at) {
    try {
        server.verify_login(request, Timestamp{at});
        return {name, true, ""};
    } catch (const ProtocolError& err) {
        return {name, false, to_string(err.code())};
    }
}

// A best-effort forged request: structurally valid, internally consistent
// with the forger's own (wrong or stolen-from-elsewhere) key material.
LoginRequest forge_request(const HonestRun& run, const Value& claimed_id, const Value& key_guess,
                           const Value& salt_guess, std::uint32_t at, RandomSource& rng) {
    const Timestamp ts{at};
    const Value t = ts.to_value();
    const Value nonce = rng.random_value(kIdWidth);
    LoginRequest request;
    request.masked_id = xor_combine(claimed_id, run.server_id);
    request.masked_nonce = xor_combine(pad(nonce, kDigestWidth), key_guess);
    request.salt_blend = xor_combine(xor_combine(nonce, salt_guess), claimed_id);
    const Value binder = xor_combine(request.masked_nonce, digest_of({&run.server_id, &nonce, &t}));
    request.auth_tag =
        digest_of({&request.masked_nonce, &binder, &request.salt_blend, &salt_guess, &t});
    request.sent_at = ts;
    return request;
}

// Runs a fresh honest exchange, lets `tamper` rewrite the response in
// flight, and reports whether the card accepts the delivered frame.
ScriptResult try_response(const std::string& name, const HonestRun& run, Mutation m,
                          std::uint32_t base_t,
                          const std::function<LoginResponse(LoginResponse)>& tamper,
                          std::uint32_t deliver_at) {
    HashCounter scratch;
    CardSession session = CardSession::local_verify(run.card, run.user_id, run.password, scratch);
    SeededRng rng(run.seed ^ 0xC0FFEE);
    LoginRequest request = session.build_login_request(run.server_id, Timestamp{base_t}, rng);
    Server server = make_server(run, Mutation::none);
    Server::PendingAuth pending = server.verify_login(request, Timestamp{base_t});
    auto [response, server_key] = server.build_response(pending, Timestamp{base_t + 1}, rng);
    const LoginResponse delivered = tamper(response);
    try {
        session.verify_response(delivered, Timestamp{deliver_at}, run.threshold2_secs,
                                run.threshold1_secs, card_policy_for(m));
        return {name, true, ""};
    } catch (const ProtocolError& err) {
        return {name, false, to_string(err.code())};
    }
}

// --- offline guessing probe -------------------------------------------------
//
// For every candidate password the adversary derives whatever the protocol
// structure lets them derive, then the signature (rank deficiency of the
// knowledge matrix + which goals opened up) is compared across candidates.
// A guessing attack exists exactly when the true password's signature is
// separable from every decoy's.

struct GuessSignature {
    std::size_t dependencies = 0;
    unsigned goal_bits = 0;

    friend bool operator==(const GuessSignature&, const GuessSignature&) = default;
};

GuessSignature probe_candidate(const HonestRun& run, const Value& candidate, bool with_card) {
    KnowledgeSet k = transcript_knowledge(run);
    if (with_card) {
        grant_card(k, run.card, "");
    }
    // Only the bare candidate is granted; everything else must come out of
    // the closure. With the card present the identity falls out of
    // masked_key ^ check_value, and a correct candidate then chains through
    // the public hash shapes all the way to the session key.
    k.grant("candidate_password", candidate);
    k.close();

    GuessSignature sig;
    sig.dependencies = k.dependency_count();
    const Value* goals[] = {&run.session_key, &run.salt, &run.client_nonce, &run.user_key};
    for (unsigned i = 0; i < 4; ++i) {
        if (k.derivable(*goals[i])) {
            sig.goal_bits |= (1u << i);
        }
    }
    return sig;
}

struct GuessOutcome {
    bool distinguishable = false;
    bool decoys_uniform = true;
    std::size_t dictionary_size = 0;
    GuessSignature true_sig;
    GuessSignature decoy_sig;
};

GuessOutcome run_guessing(const HonestRun& run, bool with_card, std::size_t decoy_count) {
    SeededRng rng(run.seed ^ 0xD1C7);
    GuessOutcome out;
    out.dictionary_size = decoy_count + 1;
    out.true_sig = probe_candidate(run, run.password, with_card);

    bool any_match = false;
    for (std::size_t i = 0; i < decoy_count; ++i) {
        const Value decoy = Value::from_text("decoy-" + rng.random_value(kIdWidth).hex());
        const GuessSignature sig = probe_candidate(run, decoy, with_card);
        if (i == 0) {
            out.decoy_sig = sig;
        } else if (sig != out.decoy_sig) {
            out.decoys_uniform = false;
        }
        if (sig == out.true_sig) {
            any_match = true;
        }
    }
    out.distinguishable = !any_match;
    return out;
}

std::string opened_goal_names(unsigned bits) {
    static const char* names[] = {"session_key", "salt", "client_nonce", "user_key"};
    std::string out;
    for (unsigned i = 0; i < 4; ++i) {
        if (bits & (1u << i)) {
            if (!out.empty()) out += ", ";
            out += names[i];
        }
    }
    return out.empty() ? "none of the goals" : out;
}

}  // namespace

ScenarioResult run_scenario(ScenarioId id, Mutation mutation, std::uint64_t seed) {
    const HonestRun run = make_honest_run(seed);
    ScenarioResult result;
    result.id = id;
    result.mutation = mutation;

    const std::uint32_t t1 = run.request.sent_at.seconds;
    const std::uint32_t fresh = t1 + 2;  // inside the request window
    const std::uint32_t stale = t1 + run.threshold1_secs + 1;
    SeededRng rng(seed ^ 0xF02C0);

    switch (id) {
        case ScenarioId::stolen_card: {
            KnowledgeSet k = transcript_knowledge(run);
            grant_card(k, run.card, "");
            k.grant("user_id", run.user_id);
            k.grant("server_id", run.server_id);
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);
            if (xor_combine(run.card.masked_key, run.card.check_value) ==
                pad(run.user_id, kDigestWidth)) {
                result.observations.push_back(
                    "masked_key ^ check_value equals the padded identity, so the reader's local "
                    "check binds the identity only, never the password; paired with a password "
                    "dictionary this same equation powers the offline-guessing break");
            }

            Server server = make_server(run, mutation);
            LoginRequest restamped = run.request;
            restamped.sent_at = Timestamp{fresh};
            result.scripts.push_back(try_request("restamped_replay", server, restamped, fresh));
            const Value key_guess =
                xor_combine(run.card.masked_key, pad(run.user_id, kDigestWidth));
            result.scripts.push_back(
                try_request("card_only_forgery", server,
                            forge_request(run, run.user_id, key_guess,
                                          rng.random_value(kIdWidth), fresh, rng),
                            fresh));
            break;
        }

        case ScenarioId::impersonation: {
            KnowledgeSet k = transcript_knowledge(run);
            k.grant("user_id", run.user_id);
            k.grant("server_id", run.server_id);
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);

            Server server = make_server(run, mutation);
            LoginRequest restamped = run.request;
            restamped.sent_at = Timestamp{fresh};
            result.scripts.push_back(try_request("restamped_replay", server, restamped, fresh));
            result.scripts.push_back(try_request("stale_replay", server, run.request, stale));
            result.scripts.push_back(
                try_request("crafted_forgery", server,
                            forge_request(run, run.user_id, random_wide(rng, kDigestWidth),
                                          rng.random_value(kIdWidth), fresh, rng),
                            fresh));
            break;
        }

        case ScenarioId::password_guessing: {
            KnowledgeSet k = transcript_knowledge(run);
            grant_card(k, run.card, "");
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);
            if (auto leaked = k.witness(run.user_id)) {
                result.observations.push_back(
                    "the card surrenders the identity before any guessing starts: user_id = " +
                    leaked->str());
            }

            const GuessOutcome gate = run_guessing(run, /*with_card=*/true, 1024);
            result.scripts.push_back({"offline_dictionary_probe", gate.distinguishable,
                                      gate.distinguishable ? "" : "uniform-signatures"});
            if (gate.distinguishable) {
                result.observations.push_back(
                    "the true password separates from all " +
                    std::to_string(gate.dictionary_size - 1) +
                    " decoys (dependency count " + std::to_string(gate.true_sig.dependencies) +
                    " vs " + std::to_string(gate.decoy_sig.dependencies) +
                    ") and the confirmed guess opens " +
                    opened_goal_names(gate.true_sig.goal_bits) +
                    "; the leaked identity is what re-enables the chain");
            } else if (gate.decoys_uniform) {
                result.observations.push_back(
                    "all " + std::to_string(gate.dictionary_size) +
                    " candidates produce identical deduction signatures, so no guess can be "
                    "confirmed offline from card plus traffic");
            }
            const GuessOutcome blind = run_guessing(run, /*with_card=*/false, 256);
            if (!blind.distinguishable && blind.decoys_uniform) {
                result.observations.push_back(
                    "from traffic alone every candidate looks the same (" +
                    std::to_string(blind.dictionary_size) +
                    " uniform signatures); the stolen card is what makes guessing possible");
            }
            break;
        }

        case ScenarioId::replay: {
            KnowledgeSet k = transcript_knowledge(run);
            k.grant("user_id", run.user_id);
            k.grant("server_id", run.server_id);
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);

            Server server = make_server(run, mutation);
            const ScriptResult original = try_request("original_delivery", server, run.request, t1);
            require(original.accepted, "honest request rejected by rebuilt server");
            result.scripts.push_back(
                try_request("replay_after_window", server, run.request, stale));
            const ScriptResult within =
                try_request("replay_within_window", server, run.request, fresh);
            if (within.accepted) {
                result.caveats.push_back(
                    "a bit-identical request replayed inside the freshness window re-enters "
                    "verification and is accepted; only timestamps guard the window, so "
                    "in-window replay suppression needs the replay-cache variant");
            }

            Server caching = make_server(run, mutation, /*replay_cache=*/true);
            const ScriptResult primed = try_request("cache_prime", caching, run.request, t1);
            require(primed.accepted, "replay-cache server rejected the first delivery");
            const ScriptResult cached =
                try_request("cached_replay", caching, run.request, fresh);
            if (!cached.accepted) {
                result.observations.push_back(
                    "the replay-cache variant rejects the in-window duplicate (" +
                    cached.reject_code + ")");
            }
            break;
        }

        case ScenarioId::key_disclosure: {
            KnowledgeSet k = transcript_knowledge(run);
            k.grant("user_id", run.user_id);
            k.grant("server_id", run.server_id);
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);
            break;
        }

        case ScenarioId::mitm_tamper: {
            KnowledgeSet k = transcript_knowledge(run);
            k.grant("user_id", run.user_id);
            k.grant("server_id", run.server_id);
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);

            Server server = make_server(run, mutation);
            LoginRequest tampered = run.request;
            tampered.masked_nonce = flip_byte(tampered.masked_nonce, 0);
            result.scripts.push_back(try_request("tampered_request", server, tampered, fresh));

            const std::uint32_t base_t = t1 + 100;
            result.scripts.push_back(try_response(
                "tampered_response", run, mutation, base_t,
                [](LoginResponse r) {
                    r.nonce_blend = flip_byte(r.nonce_blend, 0);
                    return r;
                },
                base_t + 2));
            result.scripts.push_back(try_response(
                "late_response", run, mutation, base_t,
                [](LoginResponse r) { return r; },
                base_t + 1 + run.threshold2_secs + 1));
            break;
        }

        case ScenarioId::insider: {
            KnowledgeSet k = transcript_knowledge(run);
            k.grant("user_id", run.user_id);
            k.grant("server_id", run.server_id);
            k.grant("insider_id", run.insider_id);
            k.grant("insider_password", run.insider_password);
            grant_card(k, run.insider_card, "insider_");
            k.grant("insider_salt", run.insider_salt);
            k.grant("insider_user_key", run.insider_user_key);
            k.close();
            result.goals = evaluate_goals(k, run);
            note_observations(k, run, result.observations);

            Server server = make_server(run, mutation);
            result.scripts.push_back(
                try_request("insider_forgery", server,
                            forge_request(run, run.user_id, run.insider_user_key,
                                          run.insider_salt, fresh, rng),
                            fresh));
            break;
        }
    }

    const bool goals_safe = std::none_of(result.goals.begin(), result.goals.end(),
                                         [](const GoalResult& g) { return g.derivable; });
    const bool scripts_rejected = std::none_of(result.scripts.begin(), result.scripts.end(),
                                               [](const ScriptResult& s) { return s.accepted; });
    result.prevented = goals_safe && scripts_rejected;
    return result;
}

std::vector<ScenarioResult> run_all_scenarios(Mutation mutation, std::uint64_t seed) {
    std::vector<ScenarioResult> out;
    for (ScenarioId id : all_scenarios()) {
        out.push_back(run_scenario(id, mutation, seed));
    }
    return out;
}

std::string scenarios_to_json(const std::vector<ScenarioResult>& results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ScenarioResult& r : results) {
        nlohmann::ordered_json goals = nlohmann::ordered_json::array();
        for (const GoalResult& g : r.goals) {
            goals.push_back({{"name", g.name}, {"derivable", g.derivable}, {"witness", g.witness}});
        }
        nlohmann::ordered_json scripts = nlohmann::ordered_json::array();
        for (const ScriptResult& s : r.scripts) {
            scripts.push_back(
                {{"name", s.name}, {"accepted", s.accepted}, {"reject_code", s.reject_code}});
        }
        arr.push_back({{"scenario", to_string(r.id)},
                       {"mutation", to_string(r.mutation)},
                       {"verdict", r.prevented ? "prevented" : "succeeded"},
                       {"goals", goals},
                       {"scripts", scripts},
                       {"observations", r.observations},
                       {"caveats", r.caveats}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace msauth
