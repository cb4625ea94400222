// Command-line front end: runs registrations, logins and password updates
// against JSON state files, and exposes the attack scenarios and the cost
// accounting for scripted use.
//
// Determinism contract: one seeded byte stream drives every random draw. The
// state directory's world.json remembers the seed, the draw cursor and the
// simulated clock, so any sequence of invocations replays bit-identically
// from the same starting state.
//
// Secret hygiene: no command prints or persists a password, salt, master
// secret, server secret or session key. Cards hold only their three masked
// values; session keys appear as SHA-256 fingerprints.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "msauth/bytes.hpp"
#include "msauth/card.hpp"
#include "msauth/cost.hpp"
#include "msauth/errors.hpp"
#include "msauth/hash.hpp"
#include "msauth/ra.hpp"
#include "msauth/rng.hpp"
#include "msauth/scenario.hpp"
#include "msauth/server.hpp"
#include "msauth/state_io.hpp"
#include "msauth/wire.hpp"

namespace {

namespace fs = std::filesystem;
using namespace msauth;

constexpr int kExitOk = 0;
constexpr int kExitRejected = 2;
constexpr int kExitUsage = 3;
constexpr int kExitState = 4;

struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StateFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return kExitOk;
    } catch (const ProtocolError& err) {
        std::cerr << "rejected: " << err.what() << '\n';
        return kExitRejected;
    } catch (const UsageFailure& err) {
        std::cerr << "usage error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const StateFailure& err) {
        std::cerr << "state error: " << err.what() << '\n';
        return kExitState;
    } catch (const nlohmann::json::exception& err) {
        std::cerr << "state error: " << err.what() << '\n';
        return kExitState;
    } catch (const fs::filesystem_error& err) {
        std::cerr << "state error: " << err.what() << '\n';
        return kExitState;
    }
}

Value parse_id(const std::string& hex, const char* what) {
    if (hex.size() != 2 * kIdWidth) {
        throw UsageFailure(std::string(what) + " must be " + std::to_string(2 * kIdWidth) +
                           " hex characters");
    }
    try {
        return Value::from_hex(hex);
    } catch (const std::exception&) {
        throw UsageFailure(std::string(what) + " is not valid hex");
    }
}

// --- state directory ---------------------------------------------------------

struct WorldMeta {
    std::uint64_t seed = 1;
    std::uint64_t draws = 0;
    std::uint32_t clock = 1'700'000'000;
    std::uint32_t threshold1_secs = 5;
    std::uint32_t threshold2_secs = 5;
};

fs::path meta_path(const fs::path& dir) { return dir / "world.json"; }
fs::path authority_path(const fs::path& dir) { return dir / "authority.json"; }
fs::path server_path(const fs::path& dir, const Value& id) {
    return dir / ("server-" + id.hex() + ".json");
}
fs::path card_path(const fs::path& dir, const Value& id) {
    return dir / ("card-" + id.hex() + ".json");
}

WorldMeta load_or_init_meta(const fs::path& dir, std::uint64_t seed_flag) {
    const fs::path path = meta_path(dir);
    if (!fs::exists(path)) {
        fs::create_directories(dir);
        WorldMeta meta;
        meta.seed = seed_flag;
        return meta;
    }
    const nlohmann::json j = read_json_file(path);
    if (j.at("version").get<int>() != kStateVersion) {
        throw StateFailure("unsupported world.json version");
    }
    WorldMeta meta;
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.draws = j.at("draws").get<std::uint64_t>();
    meta.clock = j.at("clock").get<std::uint32_t>();
    meta.threshold1_secs = j.at("threshold1_secs").get<std::uint32_t>();
    meta.threshold2_secs = j.at("threshold2_secs").get<std::uint32_t>();
    return meta;
}

void save_meta(const fs::path& dir, const WorldMeta& meta) {
    write_json_file(meta_path(dir), nlohmann::json{{"version", kStateVersion},
                                                   {"seed", meta.seed},
                                                   {"draws", meta.draws},
                                                   {"clock", meta.clock},
                                                   {"threshold1_secs", meta.threshold1_secs},
                                                   {"threshold2_secs", meta.threshold2_secs}});
}

SeededRng resume_rng(const WorldMeta& meta) {
    SeededRng rng(meta.seed);
    rng.discard(meta.draws);
    return rng;
}

RegistrationAuthority load_or_init_authority(const fs::path& dir, RandomSource& rng) {
    const fs::path path = authority_path(dir);
    if (fs::exists(path)) {
        return ra_from_json(read_json_file(path));
    }
    return RegistrationAuthority(rng.random_value(kIdWidth));
}

RegistrationAuthority load_authority(const fs::path& dir) {
    const fs::path path = authority_path(dir);
    if (!fs::exists(path)) {
        throw StateFailure("no authority state at " + path.string() +
                           "; run register-server or register-user first");
    }
    return ra_from_json(read_json_file(path));
}

Server load_server(const fs::path& dir, const Value& id) {
    const fs::path path = server_path(dir, id);
    if (!fs::exists(path)) {
        throw StateFailure("no server state at " + path.string());
    }
    return server_from_json(read_json_file(path));
}

IssuedCard load_card(const fs::path& dir, const Value& id) {
    const fs::path path = card_path(dir, id);
    if (!fs::exists(path)) {
        throw StateFailure("no card at " + path.string());
    }
    return card_from_json(read_json_file(path));
}

std::string fingerprint(const Value& key) { return sha256(key.bytes()).hex(); }

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
        std::cout << "wrote " << out_path << '\n';
    }
}

// --- subcommand bodies ---------------------------------------------------------

void cmd_register_server(const fs::path& dir, std::uint64_t seed_flag, const std::string& id_hex,
                         const std::string& password) {
    const Value server_id = parse_id(id_hex, "--server-id");
    WorldMeta meta = load_or_init_meta(dir, seed_flag);
    SeededRng rng = resume_rng(meta);
    RegistrationAuthority ra = load_or_init_authority(dir, rng);

    if (fs::exists(server_path(dir, server_id))) {
        throw ProtocolError(Reject::duplicate_identity, "server already enrolled");
    }

    // The server derives its credential digest from a one-shot local secret;
    // only the digest survives, in the provision pair.
    HashCounter tally;
    const Value server_secret = rng.random_value(kIdWidth);
    const Value digest =
        server_credential_digest(server_id, Value::from_text(password), server_secret, tally);
    const ServerProvision provision = ra.enroll_server(server_id, digest);

    Server server(provision, meta.threshold1_secs);
    for (const UserProvision& user : ra.user_provisions()) {
        server.install_user(user);
    }

    write_json_file(authority_path(dir), ra_to_json(ra));
    write_json_file(server_path(dir, server_id), server_to_json(server));

    // Existing cards learn the newcomer, mirroring the user-provision push in
    // register-user: enroll once, reach every server.
    std::size_t cards_updated = 0;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("card-", 0) != 0) continue;
        IssuedCard card = card_from_json(read_json_file(entry.path()));
        if (!card.knows_server(server_id)) {
            card.server_ids.push_back(server_id);
            write_json_file(entry.path(), card_to_json(card));
            ++cards_updated;
        }
    }

    meta.draws = rng.draws();
    save_meta(dir, meta);
    std::cout << "server " << server_id.hex() << " enrolled; " << server.user_count()
              << " user(s) provisioned; " << cards_updated << " card roster(s) updated\n";
}

void cmd_register_user(const fs::path& dir, std::uint64_t seed_flag, const std::string& id_hex,
                       const std::string& password) {
    const Value user_id = parse_id(id_hex, "--user-id");
    WorldMeta meta = load_or_init_meta(dir, seed_flag);
    SeededRng rng = resume_rng(meta);
    RegistrationAuthority ra = load_or_init_authority(dir, rng);

    if (fs::exists(card_path(dir, user_id))) {
        throw ProtocolError(Reject::duplicate_identity, "user already enrolled");
    }

    HashCounter tally;
    const UserEnrollment enrollment =
        prepare_enrollment(user_id, Value::from_text(password), rng, tally);
    const RegistrationAuthority::EnrollmentResult result = ra.enroll_user(enrollment, rng);

    // Push the fresh provision to every enrolled server's state file.
    std::size_t servers_updated = 0;
    for (const ServerProvision& sp : ra.servers()) {
        Server server = load_server(dir, sp.id);
        server.install_user(result.provision);
        write_json_file(server_path(dir, sp.id), server_to_json(server));
        ++servers_updated;
    }

    write_json_file(authority_path(dir), ra_to_json(ra));
    write_json_file(card_path(dir, user_id), card_to_json(result.card));
    meta.draws = rng.draws();
    save_meta(dir, meta);
    std::cout << "user " << user_id.hex() << " enrolled; card written; provisioned to "
              << servers_updated << " server(s)\n";
}

void cmd_auth(const fs::path& dir, const std::string& user_hex, const std::string& server_hex,
              const std::string& password) {
    const Value user_id = parse_id(user_hex, "--user-id");
    const Value server_id = parse_id(server_hex, "--server-id");
    if (!fs::exists(meta_path(dir))) {
        throw StateFailure("no state directory at " + dir.string());
    }
    WorldMeta meta = load_or_init_meta(dir, 1);
    SeededRng rng = resume_rng(meta);
    const IssuedCard card = load_card(dir, user_id);
    Server server = load_server(dir, server_id);

    HashCounter tally;
    CardSession session =
        CardSession::local_verify(card, user_id, Value::from_text(password), tally);

    const std::uint32_t t1 = meta.clock;
    const LoginRequest request = session.build_login_request(server_id, Timestamp{t1}, rng);
    const std::vector<std::uint8_t> request_frame = encode(request);

    const Server::PendingAuth pending =
        server.verify_login(decode_request(request_frame), Timestamp{t1 + 1});
    const auto [response, server_key] = server.build_response(pending, Timestamp{t1 + 2}, rng);
    const std::vector<std::uint8_t> response_frame = encode(response);

    const SessionKey card_key =
        session.verify_response(decode_response(response_frame), Timestamp{t1 + 3},
                                meta.threshold2_secs, meta.threshold1_secs);

    meta.clock = t1 + 4;
    meta.draws = rng.draws();
    save_meta(dir, meta);

    const bool agree = card_key.key == server_key.key;
    std::cout << "login complete: request " << request_frame.size() << " bytes, response "
              << response_frame.size() << " bytes\n";
    std::cout << "session key fingerprint (sha256 of the key; the key is never printed): "
              << fingerprint(card_key.key) << '\n';
    std::cout << (agree ? "card and server derived the same key\n"
                        : "KEY MISMATCH between card and server\n");
    if (!agree) {
        throw StateFailure("session key mismatch after successful verification");
    }
}

void cmd_update_password(const fs::path& dir, const std::string& user_hex,
                         const std::string& old_password, const std::string& new_password,
                         const std::string& verify_server_hex) {
    const Value user_id = parse_id(user_hex, "--user-id");
    if (!fs::exists(meta_path(dir))) {
        throw StateFailure("no state directory at " + dir.string());
    }
    WorldMeta meta = load_or_init_meta(dir, 1);
    IssuedCard card = load_card(dir, user_id);
    const nlohmann::json before = card_to_json(card);

    HashCounter tally;
    update_password(card, user_id, Value::from_text(old_password),
                    Value::from_text(new_password), tally);
    write_json_file(card_path(dir, user_id), card_to_json(card));
    std::cout << "card re-derived under the new password\n";
    std::cout << "note: the reader cannot verify the old password locally (the stored check "
                 "binds the identity only); if the old password was wrong, the updated card "
                 "will be rejected by servers\n";

    if (!verify_server_hex.empty()) {
        const Value server_id = parse_id(verify_server_hex, "--verify-server");
        SeededRng rng = resume_rng(meta);
        Server server = load_server(dir, server_id);
        try {
            CardSession session = CardSession::local_verify(
                card, user_id, Value::from_text(new_password), tally);
            const std::uint32_t t1 = meta.clock;
            const LoginRequest request =
                session.build_login_request(server_id, Timestamp{t1}, rng);
            const auto pending = server.verify_login(request, Timestamp{t1 + 1});
            const auto [response, server_key] =
                server.build_response(pending, Timestamp{t1 + 2}, rng);
            session.verify_response(response, Timestamp{t1 + 3}, meta.threshold2_secs,
                                    meta.threshold1_secs);
            meta.clock = t1 + 4;
            meta.draws = rng.draws();
            save_meta(dir, meta);
            std::cout << "verification login with the new password succeeded\n";
        } catch (const ProtocolError&) {
            // Roll the card back so a mistyped old password is not destructive.
            write_json_file(card_path(dir, user_id), before);
            std::cout << "verification login failed; card restored to its previous state\n";
            throw;
        }
    }
}

void cmd_attack(const std::string& scenario_name, const std::string& mutation_name,
                std::uint64_t seed, const std::string& out_path, bool expect_prevented) {
    Mutation mutation = Mutation::none;
    bool known = false;
    for (Mutation m : {Mutation::none, Mutation::skip_request_tag, Mutation::skip_response_tag,
                       Mutation::skip_freshness}) {
        if (mutation_name == to_string(m)) {
            mutation = m;
            known = true;
        }
    }
    if (!known) {
        throw UsageFailure("unknown mutation '" + mutation_name + "'");
    }

    std::vector<ScenarioResult> results;
    if (scenario_name == "all") {
        results = run_all_scenarios(mutation, seed);
    } else {
        bool found = false;
        for (ScenarioId id : all_scenarios()) {
            if (scenario_name == to_string(id)) {
                results.push_back(run_scenario(id, mutation, seed));
                found = true;
            }
        }
        if (!found) {
            throw UsageFailure("unknown scenario '" + scenario_name + "'");
        }
    }

    bool all_prevented = true;
    for (const ScenarioResult& r : results) {
        std::cout << to_string(r.id) << ": " << (r.prevented ? "prevented" : "succeeded") << '\n';
        for (const GoalResult& g : r.goals) {
            if (g.derivable) {
                std::cout << "  derived " << g.name << " = " << g.witness << '\n';
            }
        }
        for (const ScriptResult& s : r.scripts) {
            std::cout << "  " << s.name << ": "
                      << (s.accepted ? "ACCEPTED" : "rejected (" + s.reject_code + ")") << '\n';
        }
        for (const std::string& o : r.observations) {
            std::cout << "  note: " << o << '\n';
        }
        for (const std::string& c : r.caveats) {
            std::cout << "  caveat: " << c << '\n';
        }
        all_prevented = all_prevented && r.prevented;
    }
    if (!out_path.empty()) {
        write_text_file(out_path, scenarios_to_json(results));
        std::cout << "wrote " << out_path << '\n';
    }
    if (expect_prevented && !all_prevented) {
        throw ProtocolError(Reject::request_forgery, "a scenario verdict was 'succeeded'");
    }
}

void cmd_bench(const std::string& json_path, const std::string& csv_path) {
    const ComparisonReport report = build_comparison();
    std::cout << "phase costs (measured hash counts priced at the shared unit table):\n";
    std::cout << "  registration:    " << report.measured_registration.total.hashes
              << " hashes, " << report.measured_registration.total_us << " us\n";
    std::cout << "  login+auth:      " << report.measured_login_auth.total.hashes << " hashes, "
              << report.measured_login_auth.total_us << " us\n";
    std::cout << "  password update: " << report.measured_password_update.total.hashes
              << " hashes, " << report.measured_password_update.total_us << " us\n";
    std::cout << "traffic: " << report.measured_login_auth.request_bytes << " + "
              << report.measured_login_auth.response_bytes << " bytes\n";
    std::cout << "card storage: " << report.measured_login_auth.card_bytes << " bytes\n";
    std::cout << "energy at V=1, I=1: execution " << report.execution_energy_mj
              << " mJ, communication " << report.communication_energy_mj << " mJ\n";
    for (const std::string& note : report.notes) {
        std::cout << "note: " << note << '\n';
    }
    if (!json_path.empty()) {
        write_text_file(json_path, comparison_to_json(report));
        std::cout << "wrote " << json_path << '\n';
    }
    if (!csv_path.empty()) {
        write_text_file(csv_path, comparison_to_csv(report));
        std::cout << "wrote " << csv_path << '\n';
    }
}

void cmd_report(const std::string& out_path, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["comparison"] = nlohmann::ordered_json::parse(comparison_to_json(build_comparison()));
    j["scenarios"] = nlohmann::ordered_json::parse(scenarios_to_json(run_all_scenarios(
        Mutation::none, seed)));
    nlohmann::ordered_json flips = nlohmann::ordered_json::array();
    for (Mutation m : {Mutation::skip_request_tag, Mutation::skip_response_tag,
                       Mutation::skip_freshness}) {
        std::vector<std::string> flipped;
        for (const ScenarioResult& r : run_all_scenarios(m, seed)) {
            if (!r.prevented) {
                flipped.push_back(to_string(r.id));
            }
        }
        flips.push_back({{"mutation", to_string(m)}, {"flipped", flipped}});
    }
    j["mutation_sensitivity"] = flips;
    write_or_print(out_path, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-server authentication protocol workbench"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file with long-option defaults; flags override it");

    std::string state_dir;
    std::uint64_t seed = 1;
    std::string user_id_hex;
    std::string server_id_hex;
    std::string password;

    CLI::App* reg_server =
        app.add_subcommand("register-server", "Enroll an application server with the authority");
    reg_server->add_option("--state-dir", state_dir, "State directory")->required();
    reg_server->add_option("--seed", seed, "Randomness seed (used when the directory is new)");
    reg_server->add_option("--server-id", server_id_hex, "Server id, 16 hex chars")->required();
    reg_server->add_option("--password", password, "Server credential password")->required();

    CLI::App* reg_user =
        app.add_subcommand("register-user", "Enroll a user and issue their card");
    reg_user->add_option("--state-dir", state_dir, "State directory")->required();
    reg_user->add_option("--seed", seed, "Randomness seed (used when the directory is new)");
    reg_user->add_option("--user-id", user_id_hex, "User id, 16 hex chars")->required();
    reg_user->add_option("--password", password, "User password")->required();

    CLI::App* auth = app.add_subcommand("auth", "Run a full login against a server");
    auth->add_option("--state-dir", state_dir, "State directory")->required();
    auth->add_option("--user-id", user_id_hex, "User id, 16 hex chars")->required();
    auth->add_option("--server-id", server_id_hex, "Server id, 16 hex chars")->required();
    auth->add_option("--password", password, "User password")->required();

    std::string new_password;
    std::string verify_server_hex;
    CLI::App* update =
        app.add_subcommand("update-password", "Re-derive a card under a new password");
    update->add_option("--state-dir", state_dir, "State directory")->required();
    update->add_option("--user-id", user_id_hex, "User id, 16 hex chars")->required();
    update->add_option("--old-password", password, "Current password")->required();
    update->add_option("--new-password", new_password, "New password")->required();
    update->add_option("--verify-server", verify_server_hex,
                       "Server id to test the updated card against; on rejection the card file "
                       "is rolled back");

    std::string scenario_name = "all";
    std::string mutation_name = "none";
    std::string out_path;
    std::uint64_t attack_seed = 0xA11CE;
    bool expect_prevented = false;
    CLI::App* attack = app.add_subcommand("attack", "Run adversary scenarios");
    attack->add_option("--scenario", scenario_name,
                       "Scenario name (stolen-card, impersonation, password-guessing, replay, "
                       "key-disclosure, mitm-tamper, insider) or 'all'");
    attack->add_option("--mutation", mutation_name,
                       "Verification fault to inject: none, skip-request-tag, "
                       "skip-response-tag, skip-freshness");
    attack->add_option("--seed", attack_seed, "Fixture seed");
    attack->add_option("--out", out_path, "Write full JSON results to this path");
    attack->add_flag("--expect-prevented", expect_prevented,
                     "Exit non-zero if any scenario verdict is 'succeeded'");

    std::string json_path;
    std::string csv_path;
    CLI::App* bench = app.add_subcommand("bench", "Cost accounting and scheme comparison");
    bench->add_option("--json", json_path, "Write the full comparison JSON to this path");
    bench->add_option("--csv", csv_path, "Write the scheme table CSV to this path");

    std::string report_out;
    std::uint64_t report_seed = 0xA11CE;
    CLI::App* report = app.add_subcommand("report", "Combined cost + scenario JSON report");
    report->add_option("--out", report_out, "Output path (stdout when omitted)");
    report->add_option("--seed", report_seed, "Scenario fixture seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (reg_server->parsed()) {
        return guarded([&] { cmd_register_server(state_dir, seed, server_id_hex, password); });
    }
    if (reg_user->parsed()) {
        return guarded([&] { cmd_register_user(state_dir, seed, user_id_hex, password); });
    }
    if (auth->parsed()) {
        return guarded([&] { cmd_auth(state_dir, user_id_hex, server_id_hex, password); });
    }
    if (update->parsed()) {
        return guarded([&] {
            cmd_update_password(state_dir, user_id_hex, password, new_password,
                                verify_server_hex);
        });
    }
    if (attack->parsed()) {
        return guarded([&] {
            cmd_attack(scenario_name, mutation_name, attack_seed, out_path, expect_prevented);
        });
    }
    if (bench->parsed()) {
        return guarded([&] { cmd_bench(json_path, csv_path); });
    }
    if (report->parsed()) {
        return guarded([&] { cmd_report(report_out, report_seed); });
    }
    return kExitUsage;
}
