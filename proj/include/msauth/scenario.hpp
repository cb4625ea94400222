#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msauth/bytes.hpp"
#include "msauth/card.hpp"
#include "msauth/knowledge.hpp"
#include "msauth/ra.hpp"
#include "msauth/wire.hpp"

namespace msauth {

// One fully honest enrollment and login, with every internal value the
// analysis needs recomputed from first principles (card + password + frames,
// or server-held provisions) rather than copied out of actor internals.
// Value-only: scenario scripts rebuild actors from these fields at will.
struct HonestRun {
    std::uint64_t seed = 0;
    std::uint32_t threshold1_secs = 0;
    std::uint32_t threshold2_secs = 0;

    Value user_id;
    Value password;
    Value server_id;
    IssuedCard card;
    ServerProvision server_provision;
    Value masked_user_key;  // server-held per-user value

    LoginRequest request;
    LoginResponse response;
    Value session_key;

    // Recovered internals (ground truth for deduction goals).
    Value salt;
    Value user_key;
    Value client_nonce;
    Value server_nonce;
    Value session_binder;

    // A second enrolled user, the insider for the corresponding scenario.
    Value insider_id;
    Value insider_password;
    IssuedCard insider_card;
    Value insider_salt;
    Value insider_user_key;
    Value insider_masked_user_key;
};

HonestRun make_honest_run(std::uint64_t seed);

// The attack surfaces the analysis covers. Verdicts come from two gates: the
// deduction goals (key material must stay outside the adversary's computable
// span) and the scripted active attacks (every forged/replayed/tampered
// frame must be rejected).
enum class ScenarioId {
    stolen_card,
    impersonation,
    password_guessing,
    replay,
    key_disclosure,
    mitm_tamper,
    insider,
};
const char* to_string(ScenarioId id);
std::vector<ScenarioId> all_scenarios();

// Fault injections for gate sensitivity: each one must flip at least one
// scenario verdict, which shows the checks are load-bearing.
enum class Mutation { none, skip_request_tag, skip_response_tag, skip_freshness };
const char* to_string(Mutation mutation);

struct GoalResult {
    std::string name;
    bool derivable = false;
    std::string witness;  // XOR combination when derivable
};

struct ScriptResult {
    std::string name;
    bool accepted = false;
    std::string reject_code;  // empty when accepted
};

struct ScenarioResult {
    ScenarioId id = ScenarioId::stolen_card;
    Mutation mutation = Mutation::none;
    bool prevented = false;
    std::vector<GoalResult> goals;      // gating: all must be non-derivable
    std::vector<ScriptResult> scripts;  // gating: all must be rejected
    std::vector<std::string> observations;  // non-gating measured facts
    std::vector<std::string> caveats;       // accepted-by-design behaviors
};

ScenarioResult run_scenario(ScenarioId id, Mutation mutation = Mutation::none,
                            std::uint64_t seed = 0xA11CE);
std::vector<ScenarioResult> run_all_scenarios(Mutation mutation = Mutation::none,
                                              std::uint64_t seed = 0xA11CE);

std::string scenarios_to_json(const std::vector<ScenarioResult>& results);

}  // namespace msauth
