#pragma once

#include <filesystem>
#include "json.hpp"

#include "msauth/card.hpp"
#include "msauth/ra.hpp"
#include "msauth/server.hpp"

namespace msauth {

// Versioned JSON persistence. Byte fields are lowercase hex; nlohmann objects
// serialize with sorted keys, so a given state always dumps to the same bytes.
// Card files carry only the three stored values and the server list: no salt,
// password, user key or session key material ever lands in a file. The RA
// file is the RA's modeled secure storage and is the one place the master
// secret persists.
inline constexpr int kStateVersion = 1;

nlohmann::json ra_to_json(const RegistrationAuthority& ra);
RegistrationAuthority ra_from_json(const nlohmann::json& j);

nlohmann::json server_to_json(const Server& server);
Server server_from_json(const nlohmann::json& j, ServerPolicy policy = {});

nlohmann::json card_to_json(const IssuedCard& card);
IssuedCard card_from_json(const nlohmann::json& j);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace msauth
