#include "doctest.h"

#include <algorithm>
#include <map>
#include <string>

#include "msauth/scenario.hpp"

#include "json.hpp"

using namespace msauth;

namespace {

std::map<std::string, bool> verdicts(Mutation mutation) {
    std::map<std::string, bool> out;
    for (const ScenarioResult& r : run_all_scenarios(mutation)) {
        out[to_string(r.id)] = r.prevented;
    }
    return out;
}

const ScriptResult& script(const ScenarioResult& r, const std::string& name) {
    auto it = std::find_if(r.scripts.begin(), r.scripts.end(),
                           [&](const ScriptResult& s) { return s.name == name; });
    REQUIRE(it != r.scripts.end());
    return *it;
}

bool any_observation_contains(const ScenarioResult& r, const std::string& needle) {
    return std::any_of(r.observations.begin(), r.observations.end(), [&](const std::string& o) {
        return o.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("honest fixture is internally consistent") {
    const HonestRun run = make_honest_run(0xA11CE);
    CHECK(run.session_key.width() == kDigestWidth);
    CHECK(run.request.sent_at.seconds + 1 == run.response.sent_at.seconds);

    // The recovered internals satisfy the protocol's defining relations.
    CHECK(xor_combine(run.card.masked_key, run.card.check_value) ==
          pad(run.user_id, kDigestWidth));
    CHECK(xor_combine(run.masked_user_key, pad(run.user_id, kDigestWidth)) == run.user_key);
    CHECK(truncate(xor_combine(run.request.masked_nonce, run.user_key), kIdWidth) ==
          run.client_nonce);
    CHECK(xor_combine(xor_combine(run.response.nonce_blend, run.client_nonce), run.salt) ==
          run.server_nonce);
    CHECK(run.request.masked_id == xor_combine(run.user_id, run.server_id));
}

TEST_CASE("baseline verdicts: six prevented, guessing honestly succeeds") {
    const auto v = verdicts(Mutation::none);
    CHECK(v.at("stolen-card"));
    CHECK(v.at("impersonation"));
    CHECK_FALSE(v.at("password-guessing"));  // the card leaks the identity
    CHECK(v.at("replay"));
    CHECK(v.at("key-disclosure"));
    CHECK(v.at("mitm-tamper"));
    CHECK(v.at("insider"));
}

TEST_CASE("stolen card: forgeries rejected, goals underivable, leak noted") {
    const ScenarioResult r = run_scenario(ScenarioId::stolen_card);
    CHECK(r.prevented);
    for (const GoalResult& g : r.goals) CHECK_FALSE(g.derivable);
    CHECK(script(r, "restamped_replay").reject_code == "request-forgery");
    CHECK(script(r, "card_only_forgery").reject_code == "request-forgery");
    CHECK(any_observation_contains(r, "padded identity"));
}

TEST_CASE("impersonation without the card goes nowhere") {
    const ScenarioResult r = run_scenario(ScenarioId::impersonation);
    CHECK(r.prevented);
    CHECK(script(r, "restamped_replay").reject_code == "request-forgery");
    CHECK(script(r, "stale_replay").reject_code == "stale-request");
    CHECK(script(r, "crafted_forgery").reject_code == "request-forgery");
}

TEST_CASE("password guessing breaks the design once the card is stolen") {
    const ScenarioResult r = run_scenario(ScenarioId::password_guessing);
    CHECK_FALSE(r.prevented);
    CHECK(script(r, "offline_dictionary_probe").accepted);
    // The enabling leak and the consequence are both reported.
    CHECK(any_observation_contains(r, "surrenders the identity"));
    CHECK(any_observation_contains(r, "session_key"));
    // Control: from traffic alone, candidates stay indistinguishable.
    CHECK(any_observation_contains(r, "traffic alone"));
    // The base knowledge set (before any password candidate) stays safe.
    for (const GoalResult& g : r.goals) CHECK_FALSE(g.derivable);
}

TEST_CASE("replay verdict covers the window edge and documents the gap inside") {
    const ScenarioResult r = run_scenario(ScenarioId::replay);
    CHECK(r.prevented);
    CHECK(script(r, "replay_after_window").reject_code == "stale-request");
    REQUIRE(!r.caveats.empty());
    CHECK(r.caveats[0].find("inside the freshness window") != std::string::npos);
    CHECK(any_observation_contains(r, "replayed-request"));  // strict variant closes it
}

TEST_CASE("key disclosure exposes no other session material") {
    const ScenarioResult r = run_scenario(ScenarioId::key_disclosure);
    CHECK(r.prevented);
    for (const GoalResult& g : r.goals) CHECK_FALSE(g.derivable);
}

TEST_CASE("tampering and delay are caught on both directions") {
    const ScenarioResult r = run_scenario(ScenarioId::mitm_tamper);
    CHECK(r.prevented);
    CHECK(script(r, "tampered_request").reject_code == "request-forgery");
    CHECK(script(r, "tampered_response").reject_code == "response-forgery");
    CHECK(script(r, "late_response").reject_code == "stale-response");
}

TEST_CASE("an insider's own credentials do not open a peer's session") {
    const ScenarioResult r = run_scenario(ScenarioId::insider);
    CHECK(r.prevented);
    CHECK(script(r, "insider_forgery").reject_code == "request-forgery");
    for (const GoalResult& g : r.goals) CHECK_FALSE(g.derivable);
}

TEST_CASE("every injected fault flips at least one verdict") {
    const auto baseline = verdicts(Mutation::none);

    const auto no_request_tag = verdicts(Mutation::skip_request_tag);
    CHECK_FALSE(no_request_tag.at("stolen-card"));
    CHECK_FALSE(no_request_tag.at("impersonation"));
    CHECK_FALSE(no_request_tag.at("mitm-tamper"));
    CHECK_FALSE(no_request_tag.at("insider"));
    CHECK(no_request_tag.at("replay"));  // freshness still holds the line

    const auto no_response_tag = verdicts(Mutation::skip_response_tag);
    CHECK_FALSE(no_response_tag.at("mitm-tamper"));
    CHECK(no_response_tag.at("stolen-card"));
    CHECK(no_response_tag.at("impersonation"));

    const auto no_freshness = verdicts(Mutation::skip_freshness);
    CHECK_FALSE(no_freshness.at("impersonation"));
    CHECK_FALSE(no_freshness.at("replay"));
    CHECK_FALSE(no_freshness.at("mitm-tamper"));

    for (const auto& mutated : {no_request_tag, no_response_tag, no_freshness}) {
        std::size_t flipped = 0;
        for (const auto& [name, prevented] : baseline) {
            if (mutated.at(name) != prevented) ++flipped;
        }
        CHECK(flipped >= 1);
    }
}

TEST_CASE("goal witnesses name real public values") {
    // Under the fault that admits forgeries, the successful scripts flip the
    // verdict, but derivability findings still carry replayable witnesses.
    const ScenarioResult r = run_scenario(ScenarioId::impersonation);
    const bool nonce_noted = any_observation_contains(r, "server nonce is computable");
    CHECK(nonce_noted);
    const bool names_inputs = any_observation_contains(r, "nonce_blend") &&
                              any_observation_contains(r, "salt_blend");
    CHECK(names_inputs);
}

TEST_CASE("scenario report serializes every section") {
    const auto results = run_all_scenarios(Mutation::none);
    const std::string text = scenarios_to_json(results);
    const auto parsed = nlohmann::json::parse(text);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 7);
    for (const auto& entry : parsed) {
        CHECK(entry.contains("scenario"));
        CHECK(entry.contains("verdict"));
        CHECK(entry.contains("goals"));
        CHECK(entry.contains("scripts"));
        CHECK(entry.at("goals").is_array());
    }
    CHECK(parsed[2].at("scenario") == "password-guessing");
    CHECK(parsed[2].at("verdict") == "succeeded");
}
