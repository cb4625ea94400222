// End-to-end tests of the command-line front end, run as real subprocesses:
// exit codes, output hygiene, state-file contents, determinism across process
// restarts, and the documented failure modes.

#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
#ifdef MSAUTH_CLI_PATH
    return MSAUTH_CLI_PATH;
#else
    const char* env = std::getenv("MSAUTH_CLI");
    REQUIRE(env != nullptr);
    return env;
#endif
}

struct CliResult {
    int code = -1;
    std::string output;  // stdout and stderr interleaved

    bool contains(const std::string& needle) const {
        return output.find(needle) != std::string::npos;
    }
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path() + "\" " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = ::pclose(pipe);
    CliResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = std::move(out);
    return result;
}

// Fresh state directory per test, removed on scope exit.
struct TempDir {
    fs::path path;

    TempDir() {
        static std::atomic<int> counter{0};
        path = fs::temp_directory_path() /
               ("msauth-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

constexpr const char* kUser = "0102030405060708";
constexpr const char* kServer = "1112131415161718";

// Registers one server and one user with fixed ids and passwords.
void enroll(const TempDir& dir, const std::string& seed = "7") {
    CliResult s = run_cli("register-server --state-dir '" + dir.str() + "' --seed " + seed +
                          " --server-id " + kServer + " --password 'relay credential'");
    REQUIRE(s.code == 0);
    CliResult u = run_cli("register-user --state-dir '" + dir.str() + "' --user-id " +
                          std::string(kUser) + " --password 'correct horse'");
    REQUIRE(u.code == 0);
    REQUIRE(u.contains("provisioned to 1 server(s)"));
}

std::string fingerprint_line(const CliResult& r) {
    const auto pos = r.output.find("fingerprint");
    REQUIRE(pos != std::string::npos);
    const auto end = r.output.find('\n', pos);
    return r.output.substr(pos, end - pos);
}

}  // namespace

TEST_CASE("cli: full enrollment and login round trip") {
    TempDir dir;
    enroll(dir);

    const CliResult auth = run_cli("auth --state-dir '" + dir.str() + "' --user-id " +
                                   std::string(kUser) + " --server-id " + kServer +
                                   " --password 'correct horse'");
    CHECK(auth.code == 0);
    CHECK(auth.contains("login complete: request 84 bytes, response 44 bytes"));
    CHECK(auth.contains("card and server derived the same key"));
    CHECK(auth.contains("fingerprint"));
    // The password never appears in any output.
    CHECK_FALSE(auth.contains("correct horse"));
}

TEST_CASE("cli: a server enrolled later is reachable with an already-issued card") {
    TempDir dir;
    const CliResult u = run_cli("register-user --state-dir '" + dir.str() + "' --seed 7" +
                                " --user-id " + std::string(kUser) +
                                " --password 'correct horse'");
    REQUIRE(u.code == 0);
    REQUIRE(u.contains("provisioned to 0 server(s)"));

    const CliResult s = run_cli("register-server --state-dir '" + dir.str() + "' --server-id " +
                                kServer + " --password 'relay credential'");
    REQUIRE(s.code == 0);
    CHECK(s.contains("1 user(s) provisioned"));
    CHECK(s.contains("1 card roster(s) updated"));

    CHECK(run_cli("auth --state-dir '" + dir.str() + "' --user-id " + std::string(kUser) +
                  " --server-id " + kServer + " --password 'correct horse'")
              .code == 0);
}

TEST_CASE("cli: usage errors exit 3") {
    CHECK(run_cli("").code == 3);                       // no subcommand
    CHECK(run_cli("auth --user-id " + std::string(kUser)).code == 3);  // missing required
    CHECK(run_cli("attack --scenario no-such-attack").code == 3);
    CHECK(run_cli("attack --mutation no-such-fault").code == 3);

    TempDir dir;
    const CliResult bad_hex = run_cli("register-server --state-dir '" + dir.str() +
                                      "' --server-id zzzz --password x");
    CHECK(bad_hex.code == 3);
}

TEST_CASE("cli: protocol rejections exit 2, state problems exit 4") {
    TempDir dir;
    enroll(dir);

    const CliResult wrong_pw = run_cli("auth --state-dir '" + dir.str() + "' --user-id " +
                                       std::string(kUser) + " --server-id " + kServer +
                                       " --password 'incorrect horse'");
    CHECK(wrong_pw.code == 2);
    CHECK(wrong_pw.contains("rejected:"));
    CHECK(wrong_pw.contains("request-forgery"));

    const CliResult duplicate = run_cli("register-user --state-dir '" + dir.str() +
                                        "' --user-id " + std::string(kUser) + " --password x");
    CHECK(duplicate.code == 2);
    CHECK(duplicate.contains("duplicate-identity"));

    TempDir empty;
    const CliResult no_state = run_cli("auth --state-dir '" + empty.str() + "' --user-id " +
                                       std::string(kUser) + " --server-id " + kServer +
                                       " --password x");
    CHECK(no_state.code == 4);
    CHECK(no_state.contains("state error"));

    const CliResult no_card = run_cli("auth --state-dir '" + dir.str() +
                                      "' --user-id 9999999999999999 --server-id " + kServer +
                                      " --password x");
    CHECK(no_card.code == 4);
}

TEST_CASE("cli: corrupt state file exits 4") {
    TempDir dir;
    enroll(dir);
    std::ofstream(dir.path / ("card-" + std::string(kUser) + ".json")) << "{not json";
    const CliResult r = run_cli("auth --state-dir '" + dir.str() + "' --user-id " +
                                std::string(kUser) + " --server-id " + kServer + " --password x");
    CHECK(r.code == 4);
}

TEST_CASE("cli: password update, rollback protection, and the silent-corruption hazard") {
    TempDir dir;
    enroll(dir);
    const std::string base = " --state-dir '" + dir.str() + "' --user-id " + std::string(kUser);

    // Wrong old password with --verify-server: the trial login fails and the
    // card file is rolled back, so the original password still works.
    const CliResult guarded = run_cli("update-password" + base +
                                      " --old-password 'wrong horse' --new-password 'next pw'"
                                      " --verify-server " + kServer);
    CHECK(guarded.code == 2);
    CHECK(guarded.contains("card restored"));
    CHECK(run_cli("auth" + base + " --server-id " + kServer + " --password 'correct horse'")
              .code == 0);

    // Honest update with verification: new password logs in, old is rejected.
    const CliResult updated = run_cli("update-password" + base +
                                      " --old-password 'correct horse'"
                                      " --new-password 'battery staple' --verify-server " +
                                      kServer);
    CHECK(updated.code == 0);
    CHECK(updated.contains("verification login with the new password succeeded"));
    CHECK(updated.contains("binds the identity only"));
    CHECK(run_cli("auth" + base + " --server-id " + kServer + " --password 'battery staple'")
              .code == 0);
    CHECK(run_cli("auth" + base + " --server-id " + kServer + " --password 'correct horse'")
              .code == 2);

    // Without --verify-server a wrong old password is NOT detectable (the
    // reader's check is identity-only) and quietly bricks the card.
    const CliResult unguarded = run_cli("update-password" + base +
                                        " --old-password 'wrong again' --new-password 'doomed'");
    CHECK(unguarded.code == 0);
    CHECK(run_cli("auth" + base + " --server-id " + kServer + " --password 'doomed'").code == 2);
    CHECK(run_cli("auth" + base + " --server-id " + kServer + " --password 'battery staple'")
              .code == 2);
}

TEST_CASE("cli: state files carry no plaintext secrets") {
    TempDir dir;
    enroll(dir);
    REQUIRE(run_cli("auth --state-dir '" + dir.str() + "' --user-id " + std::string(kUser) +
                    " --server-id " + kServer + " --password 'correct horse'")
                .code == 0);

    const std::string card = read_file(dir.path / ("card-" + std::string(kUser) + ".json"));
    const std::string server = read_file(dir.path / ("server-" + std::string(kServer) + ".json"));
    const std::string world = read_file(dir.path / "world.json");
    const std::string authority = read_file(dir.path / "authority.json");

    for (const std::string* file : {&card, &server, &world, &authority}) {
        CHECK(file->find("correct horse") == std::string::npos);
        CHECK(file->find("relay credential") == std::string::npos);
    }

    // The card holds exactly its three masked values and the server list.
    const auto card_json = nlohmann::json::parse(card);
    CHECK(card_json.size() == 5);
    for (const char* key : {"version", "masked_salt", "masked_key", "check_value", "server_ids"})
        CHECK(card_json.contains(key));

    // The authority's master secret stays in authority.json and nowhere else.
    const auto authority_json = nlohmann::json::parse(authority);
    const std::string master_hex = authority_json.at("master_secret").get<std::string>();
    REQUIRE(!master_hex.empty());
    CHECK(card.find(master_hex) == std::string::npos);
    CHECK(server.find(master_hex) == std::string::npos);
    CHECK(world.find(master_hex) == std::string::npos);
}

TEST_CASE("cli: identical command sequences replay bit-identically") {
    TempDir a;
    TempDir b;
    enroll(a, "99");
    enroll(b, "99");

    const std::string auth_args = " --user-id " + std::string(kUser) + " --server-id " + kServer +
                                  " --password 'correct horse'";
    const CliResult first_a = run_cli("auth --state-dir '" + a.str() + "'" + auth_args);
    const CliResult first_b = run_cli("auth --state-dir '" + b.str() + "'" + auth_args);
    REQUIRE(first_a.code == 0);
    REQUIRE(first_b.code == 0);
    CHECK(fingerprint_line(first_a) == fingerprint_line(first_b));

    // A second login draws fresh randomness from the persisted cursor: same on
    // both sides, different from the first exchange.
    const CliResult second_a = run_cli("auth --state-dir '" + a.str() + "'" + auth_args);
    const CliResult second_b = run_cli("auth --state-dir '" + b.str() + "'" + auth_args);
    CHECK(fingerprint_line(second_a) == fingerprint_line(second_b));
    CHECK(fingerprint_line(second_a) != fingerprint_line(first_a));

    // The whole state directory is reproducible, file for file.
    for (const char* name : {"world.json", "authority.json"}) {
        CHECK(read_file(a.path / name) == read_file(b.path / name));
    }
    const std::string card_name = "card-" + std::string(kUser) + ".json";
    const std::string server_name = "server-" + std::string(kServer) + ".json";
    CHECK(read_file(a.path / card_name) == read_file(b.path / card_name));
    CHECK(read_file(a.path / server_name) == read_file(b.path / server_name));

    // A different seed produces a different world.
    TempDir c;
    enroll(c, "100");
    const CliResult first_c = run_cli("auth --state-dir '" + c.str() + "'" + auth_args);
    REQUIRE(first_c.code == 0);
    CHECK(fingerprint_line(first_c) != fingerprint_line(first_a));
}

TEST_CASE("cli: attack scenarios report verdicts and honor --expect-prevented") {
    const CliResult replay = run_cli("attack --scenario replay");
    CHECK(replay.code == 0);
    CHECK(replay.contains("replay: prevented"));
    CHECK(replay.contains("caveat:"));
    CHECK(replay.contains("rejected (stale-request)"));

    const CliResult flipped = run_cli("attack --scenario stolen-card --mutation skip-request-tag");
    CHECK(flipped.code == 0);  // reporting, not asserting
    CHECK(flipped.contains("stolen-card: succeeded"));
    CHECK(flipped.contains("ACCEPTED"));

    TempDir dir;
    const std::string out = (dir.path / "attack.json").string();
    const CliResult all = run_cli("attack --scenario all --expect-prevented --out '" + out + "'");
    CHECK(all.code == 2);  // the guessing scenario defeats the design
    CHECK(all.contains("password-guessing: succeeded"));
    CHECK(all.contains("surrenders the identity"));

    const auto parsed = nlohmann::json::parse(read_file(out));
    REQUIRE(parsed.is_array());
    CHECK(parsed.size() == 7);
}

TEST_CASE("cli: bench prints measured costs and writes both formats") {
    TempDir dir;
    const std::string json_path = (dir.path / "bench.json").string();
    const std::string csv_path = (dir.path / "bench.csv").string();
    const CliResult bench =
        run_cli("bench --json '" + json_path + "' --csv '" + csv_path + "'");
    CHECK(bench.code == 0);
    CHECK(bench.contains("registration:    3 hashes, 1740 us"));
    CHECK(bench.contains("login+auth:      10 hashes, 5800 us"));
    CHECK(bench.contains("traffic: 84 + 44 bytes"));

    const auto parsed = nlohmann::json::parse(read_file(json_path));
    CHECK(parsed.at("schemes").size() == 8);
    CHECK(read_file(csv_path).find("this design (measured)") != std::string::npos);
}

TEST_CASE("cli: report bundles costs, verdicts and fault sensitivity") {
    TempDir dir;
    const std::string out = (dir.path / "report.json").string();
    const CliResult report = run_cli("report --out '" + out + "'");
    CHECK(report.code == 0);

    const auto parsed = nlohmann::json::parse(read_file(out));
    CHECK(parsed.contains("comparison"));
    REQUIRE(parsed.contains("scenarios"));
    CHECK(parsed.at("scenarios").size() == 7);
    REQUIRE(parsed.contains("mutation_sensitivity"));
    REQUIRE(parsed.at("mutation_sensitivity").size() == 3);
    for (const auto& entry : parsed.at("mutation_sensitivity")) {
        CHECK(!entry.at("flipped").empty());  // every fault flips something
    }
}
