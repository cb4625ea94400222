#include "msauth/state_io.hpp"

#include <fstream>

#include "msauth/errors.hpp"

namespace msauth {

namespace {

void check_version(const nlohmann::json& j, const char* what) {
    if (!j.is_object() || !j.contains("version") || j.at("version").get<int>() != kStateVersion)
        throw ProtocolError(Reject::malformed_frame,
                            std::string(what) + " state has unsupported version");
}

Value hex_field(const nlohmann::json& j, const char* key, std::size_t width) {
    Value v = Value::from_hex(j.at(key).get<std::string>());
    require_width(v, width, key);
    return v;
}

}  // namespace

nlohmann::json ra_to_json(const RegistrationAuthority& ra) {
    nlohmann::json servers = nlohmann::json::array();
    for (const ServerProvision& s : ra.servers())
        servers.push_back({{"id", s.id.hex()},
                           {"credential_digest", s.digest.hex()},
                           {"masked_digest", s.masked_digest.hex()}});
    nlohmann::json users = nlohmann::json::array();
    for (const UserProvision& u : ra.user_provisions())
        users.push_back({{"id", u.user_id.hex()}, {"masked_user_key", u.masked_user_key.hex()}});
    return {{"version", kStateVersion},
            {"master_secret", ra.master_secret().hex()},
            {"servers", std::move(servers)},
            {"users", std::move(users)}};
}

RegistrationAuthority ra_from_json(const nlohmann::json& j) {
    check_version(j, "ra");
    std::vector<ServerProvision> servers;
    for (const nlohmann::json& s : j.at("servers"))
        servers.push_back(ServerProvision{hex_field(s, "id", kIdWidth),
                                          hex_field(s, "credential_digest", kDigestWidth),
                                          hex_field(s, "masked_digest", kDigestWidth)});
    std::vector<UserProvision> users;
    for (const nlohmann::json& u : j.at("users"))
        users.push_back(
            UserProvision{hex_field(u, "id", kIdWidth), hex_field(u, "masked_user_key", kDigestWidth)});
    return RegistrationAuthority::restore(hex_field(j, "master_secret", kIdWidth), std::move(servers),
                                          std::move(users));
}

nlohmann::json server_to_json(const Server& server) {
    nlohmann::json users = nlohmann::json::array();
    for (const auto& [id, masked_key] : server.users())
        users.push_back({{"id", id.hex()}, {"masked_user_key", masked_key.hex()}});
    return {{"version", kStateVersion},
            {"id", server.id().hex()},
            {"credential_digest", server.provision().digest.hex()},
            {"masked_digest", server.provision().masked_digest.hex()},
            {"threshold1_secs", server.threshold1_secs()},
            {"users", std::move(users)}};
}

Server server_from_json(const nlohmann::json& j, ServerPolicy policy) {
    check_version(j, "server");
    ServerProvision provision{hex_field(j, "id", kIdWidth), hex_field(j, "credential_digest", kDigestWidth),
                              hex_field(j, "masked_digest", kDigestWidth)};
    Server server(std::move(provision), j.at("threshold1_secs").get<std::uint32_t>(), policy);
    for (const nlohmann::json& u : j.at("users"))
        server.install_user(
            UserProvision{hex_field(u, "id", kIdWidth), hex_field(u, "masked_user_key", kDigestWidth)});
    return server;
}

nlohmann::json card_to_json(const IssuedCard& card) {
    nlohmann::json ids = nlohmann::json::array();
    for (const Value& id : card.server_ids) ids.push_back(id.hex());
    return {{"version", kStateVersion},
            {"masked_salt", card.masked_salt.hex()},
            {"masked_key", card.masked_key.hex()},
            {"check_value", card.check_value.hex()},
            {"server_ids", std::move(ids)}};
}

IssuedCard card_from_json(const nlohmann::json& j) {
    check_version(j, "card");
    IssuedCard card;
    card.masked_salt = hex_field(j, "masked_salt", kDigestWidth);
    card.masked_key = hex_field(j, "masked_key", kDigestWidth);
    card.check_value = hex_field(j, "check_value", kDigestWidth);
    for (const nlohmann::json& id : j.at("server_ids")) {
        Value v = Value::from_hex(id.get<std::string>());
        require_width(v, kIdWidth, "server id");
        card.server_ids.push_back(std::move(v));
    }
    return card;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return nlohmann::json::parse(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace msauth
