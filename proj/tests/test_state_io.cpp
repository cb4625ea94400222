#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "golden.hpp"
#include "msauth/errors.hpp"
#include "msauth/state_io.hpp"

using namespace msauth;

namespace {

RegistrationAuthority populated_ra() {
    RegistrationAuthority ra(Value::from_hex(golden::kMasterSecretHex));
    ra.enroll_server(Value::from_hex(golden::kServerIdHex),
                     Value::from_hex(golden::kServerDigest));
    HashCounter counter;
    FixedRng salt_source({Value::from_hex(golden::kSaltHex)});
    const UserEnrollment enrollment =
        prepare_enrollment(Value::from_hex(golden::kUserIdHex),
                           Value::from_text(golden::kPassword), salt_source, counter);
    FixedRng issue_nonce({Value::from_hex(golden::kIssueNonceHex)});
    ra.enroll_user(enrollment, issue_nonce);
    return ra;
}

}  // namespace

TEST_CASE("authority state survives a json round trip") {
    const RegistrationAuthority ra = populated_ra();
    const nlohmann::json j = ra_to_json(ra);
    const RegistrationAuthority back = ra_from_json(j);

    CHECK(back.master_secret() == ra.master_secret());
    REQUIRE(back.servers().size() == 1);
    CHECK(back.servers()[0].masked_digest.hex() == golden::kMaskedServerDigest);
    REQUIRE(back.user_provisions().size() == 1);
    CHECK(back.user_provisions()[0].masked_user_key.hex() == golden::kMaskedUserKey);
    CHECK(ra_to_json(back).dump() == j.dump());  // stable encoding
}

TEST_CASE("server state round trips and still authenticates") {
    ServerProvision provision{Value::from_hex(golden::kServerIdHex),
                              Value::from_hex(golden::kServerDigest),
                              Value::from_hex(golden::kMaskedServerDigest)};
    Server server(provision, golden::kWindow);
    server.install_user({Value::from_hex(golden::kUserIdHex),
                         Value::from_hex(golden::kMaskedUserKey)});

    Server back = server_from_json(server_to_json(server));
    CHECK(back.id() == server.id());
    CHECK(back.threshold1_secs() == golden::kWindow);
    CHECK(back.user_count() == 1);

    // The restored server completes the pinned exchange.
    IssuedCard card;
    card.masked_salt = Value::from_hex(golden::kMaskedSalt);
    card.masked_key = Value::from_hex(golden::kMaskedKey);
    card.check_value = Value::from_hex(golden::kCheckValue);
    card.server_ids = {Value::from_hex(golden::kServerIdHex)};
    HashCounter h;
    CardSession session = CardSession::local_verify(
        card, Value::from_hex(golden::kUserIdHex), Value::from_text(golden::kPassword), h);
    FixedRng nonce({Value::from_hex(golden::kClientNonceHex)});
    const LoginRequest request = session.build_login_request(
        Value::from_hex(golden::kServerIdHex), Timestamp{golden::kT1}, nonce);
    const auto pending = back.verify_login(request, Timestamp{golden::kT1 + 1});
    FixedRng nj({Value::from_hex(golden::kServerNonceHex)});
    const auto [response, key] = back.build_response(pending, Timestamp{golden::kT2}, nj);
    CHECK(key.key.hex() == golden::kSessionKey);
}

TEST_CASE("card files hold exactly the three stored values plus servers") {
    IssuedCard card;
    card.masked_salt = Value::from_hex(golden::kMaskedSalt);
    card.masked_key = Value::from_hex(golden::kMaskedKey);
    card.check_value = Value::from_hex(golden::kCheckValue);
    card.server_ids = {Value::from_hex(golden::kServerIdHex)};

    const nlohmann::json j = card_to_json(card);
    const IssuedCard back = card_from_json(j);
    CHECK(back.masked_salt == card.masked_salt);
    CHECK(back.masked_key == card.masked_key);
    CHECK(back.check_value == card.check_value);
    REQUIRE(back.server_ids.size() == 1);
    CHECK(back.server_ids[0].hex() == golden::kServerIdHex);

    // Nothing password- or salt-shaped may appear in the serialized form.
    const std::string text = j.dump();
    CHECK(text.find(golden::kSaltHex) == std::string::npos);
    CHECK(text.find(golden::kUserKey) == std::string::npos);
    CHECK(text.find("password") == std::string::npos);
}

TEST_CASE("version mismatches are refused") {
    nlohmann::json j = card_to_json(IssuedCard{Value::from_hex(golden::kMaskedSalt),
                                               Value::from_hex(golden::kMaskedKey),
                                               Value::from_hex(golden::kCheckValue),
                                               {}});
    j["version"] = kStateVersion + 1;
    CHECK_THROWS_AS(card_from_json(j), ProtocolError);
}

TEST_CASE("json files round trip through the filesystem") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "msauth-test-state";
    fs::create_directories(dir);
    const fs::path path = dir / "card.json";

    const nlohmann::json j = card_to_json(IssuedCard{Value::from_hex(golden::kMaskedSalt),
                                                     Value::from_hex(golden::kMaskedKey),
                                                     Value::from_hex(golden::kCheckValue),
                                                     {Value::from_hex(golden::kServerIdHex)}});
    write_json_file(path, j);
    CHECK(read_json_file(path).dump() == j.dump());
    fs::remove_all(dir);
}
