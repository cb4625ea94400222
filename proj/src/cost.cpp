#include "msauth/cost.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "msauth/sim.hpp"

namespace msauth {

std::uint64_t analytical_us(const OpCounts& counts, const OpCostTable& table) {
    return counts.hashes * table.hash_us + counts.ec_points * table.ec_point_us +
           counts.chaotic_maps * table.chaotic_map_us;
}

std::size_t field_bytes(const FieldCounts& counts, const FieldSizes& sizes) {
    return counts.hashes * sizes.hash + counts.short_values * sizes.short_value +
           counts.timestamps * sizes.timestamp + counts.chaotic_maps * sizes.chaotic_map +
           counts.ec_points * sizes.ec_point;
}

std::vector<SchemeProfile> baseline_profiles() {
    // Each row restates the operation and field inventory that scheme's own
    // cost tables publish, priced here under one shared unit table.
    return {
        {"Lee et al. (2014)",
         {.hashes = 3},
         {.hashes = 11, .chaotic_maps = 6},
         {.hashes = 2, .short_values = 3, .timestamps = 1},
         {.hashes = 5, .chaotic_maps = 3}},
        {"Banerjee et al. (2015)",
         {.hashes = 7},
         {.hashes = 17},
         {.hashes = 5, .short_values = 1},
         {.hashes = 7}},
        {"Sun et al. (2016)",
         {.hashes = 6},
         {.hashes = 18},
         {.hashes = 5, .short_values = 1},
         {.hashes = 7}},
        {"Li et al. (2016)",
         {.hashes = 3},
         {.hashes = 19, .chaotic_maps = 6},
         {.hashes = 3, .short_values = 2, .timestamps = 1},
         {.hashes = 13, .short_values = 1, .chaotic_maps = 4}},
        {"Jangirala et al. (2017)",
         {.hashes = 7},
         {.hashes = 23},
         {.hashes = 5, .short_values = 2},
         {.hashes = 7}},
        {"Irshad et al. (2018)",
         {.hashes = 3},
         {.hashes = 29, .chaotic_maps = 6},
         {.hashes = 3, .short_values = 3, .chaotic_maps = 1},
         {.hashes = 16, .short_values = 1, .chaotic_maps = 4}},
        {"Ying & Nayak (2019)",
         {.hashes = 4, .ec_points = 2},
         {.hashes = 9, .ec_points = 7},
         {.hashes = 2, .short_values = 1, .ec_points = 3},
         {.hashes = 2, .short_values = 1, .ec_points = 5}},
        {"this design",
         {.hashes = 3},
         {.hashes = 10},
         {.hashes = 4, .short_values = 1},
         {.hashes = 3, .short_values = 3, .timestamps = 2}},
    };
}

namespace {

struct CounterSnapshot {
    std::uint64_t user = 0;
    std::uint64_t infra = 0;
};

CounterSnapshot snapshot(World& world) {
    return {world.user_side_counter().invocations,
            world.ra().counter().invocations + world.server_side_hashes()};
}

OpCounts hash_delta(std::uint64_t before, std::uint64_t after) {
    return OpCounts{.hashes = after - before};
}

std::size_t card_footprint(const IssuedCard& card) {
    return 3 * kDigestWidth + card.server_ids.size() * kIdWidth;
}

}  // namespace

PhaseMeasurement measure_phase(Phase phase, const OpCostTable& table) {
    WorldConfig config;
    config.seed = 0x5EED;
    World world(config);

    const Value server_id = Value::from_hex("1112131415161718");
    const Value user_id = Value::from_hex("0102030405060708");
    const Value server_password = Value::from_text("relay credential");
    const Value user_password = Value::from_text("correct horse");
    const Value next_password = Value::from_text("battery staple");

    PhaseMeasurement out;
    world.register_server(server_id, server_password);

    if (phase == Phase::registration) {
        const CounterSnapshot before = snapshot(world);
        IssuedCard& card = world.register_user(user_id, user_password);
        const CounterSnapshot after = snapshot(world);
        out.user_side = hash_delta(before.user, after.user);
        out.infra_side = hash_delta(before.infra, after.infra);
        out.card_bytes = card_footprint(card);
    } else {
        IssuedCard& card = world.register_user(user_id, user_password);
        out.card_bytes = card_footprint(card);
        const CounterSnapshot before = snapshot(world);
        if (phase == Phase::login_auth) {
            World::AuthOutcome outcome = world.login(user_id, user_password, server_id);
            out.request_bytes = outcome.request_bytes;
            out.response_bytes = outcome.response_bytes;
        } else {
            world.update_user_password(user_id, user_password, next_password);
        }
        const CounterSnapshot after = snapshot(world);
        out.user_side = hash_delta(before.user, after.user);
        out.infra_side = hash_delta(before.infra, after.infra);
    }

    out.total = OpCounts{.hashes = out.user_side.hashes + out.infra_side.hashes};
    out.total_us = analytical_us(out.total, table);
    return out;
}

double execution_energy_mj(double volts, double amps, std::uint64_t execution_us) {
    // volts * amps * milliseconds is millijoules directly.
    return volts * amps * (static_cast<double>(execution_us) / 1000.0);
}

double communication_energy_mj(double volts, double amps, std::size_t message_bytes,
                               double data_rate_bits_per_sec) {
    if (data_rate_bits_per_sec <= 0.0) {
        throw std::invalid_argument("communication_energy_mj: data rate must be positive");
    }
    const double seconds = 8.0 * static_cast<double>(message_bytes) / data_rate_bits_per_sec;
    return volts * amps * seconds * 1000.0;
}

ComparisonReport build_comparison(const OpCostTable& table) {
    ComparisonReport report;

    const std::vector<SchemeProfile> profiles = baseline_profiles();
    for (const SchemeProfile& profile : profiles) {
        report.schemes.push_back({profile.name, analytical_us(profile.registration, table),
                                  analytical_us(profile.login_auth, table),
                                  field_bytes(profile.card_storage), field_bytes(profile.traffic)});
    }

    const SchemeReport& own = report.schemes.back();
    report.advertised_registration_us = own.registration_us;
    report.advertised_login_auth_us = own.login_auth_us;
    report.advertised_storage_bytes = own.storage_bytes;
    report.advertised_traffic_bytes = own.traffic_bytes;

    report.measured_registration = measure_phase(Phase::registration, table);
    report.measured_login_auth = measure_phase(Phase::login_auth, table);
    report.measured_password_update = measure_phase(Phase::password_update, table);

    std::uint64_t best_login = std::numeric_limits<std::uint64_t>::max();
    std::size_t best_traffic = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i + 1 < report.schemes.size(); ++i) {
        best_login = std::min(best_login, report.schemes[i].login_auth_us);
        best_traffic = std::min(best_traffic, report.schemes[i].traffic_bytes);
    }
    const std::uint64_t measured_login_us = report.measured_login_auth.total_us;
    const std::size_t measured_traffic =
        report.measured_login_auth.request_bytes + report.measured_login_auth.response_bytes;
    report.execution_saving =
        1.0 - static_cast<double>(measured_login_us) / static_cast<double>(best_login);
    report.traffic_saving =
        1.0 - static_cast<double>(measured_traffic) / static_cast<double>(best_traffic);

    report.execution_energy_mj = msauth::execution_energy_mj(1.0, 1.0, measured_login_us);
    report.communication_energy_mj = msauth::communication_energy_mj(1.0, 1.0, measured_traffic);

    std::ostringstream exec_note;
    exec_note << "Execution saving vs the fastest baseline is "
              << static_cast<int>(report.execution_saving * 10000.0) / 100.0
              << "%; the advertised 44% reproduces against the second-fastest baseline "
                 "(10440 us), not the fastest (9860 us).";
    report.notes.push_back(exec_note.str());
    report.notes.push_back(
        "Traffic saving vs the leanest baseline (208 bytes) is 38.46%, matching the advertised "
        "38%; the companion 42% figure reproduces against the 224-byte baselines.");
    report.notes.push_back(
        "Card storage measured from an issued card is 104 bytes (three 32-byte values plus one "
        "8-byte server list entry); the advertised inventory of four hash-width values plus one "
        "short value prices at 136 bytes. The claim that the leanest baseline (92 bytes) stores "
        "~19% less reconciles with neither figure (92 is 32% below 136 and 12% below 104).");

    return report;
}

namespace {

nlohmann::ordered_json counts_json(const OpCounts& counts) {
    return {{"hashes", counts.hashes},
            {"ec_points", counts.ec_points},
            {"chaotic_maps", counts.chaotic_maps}};
}

nlohmann::ordered_json measurement_json(const PhaseMeasurement& m) {
    nlohmann::ordered_json j;
    j["user_side"] = counts_json(m.user_side);
    j["infra_side"] = counts_json(m.infra_side);
    j["total"] = counts_json(m.total);
    j["total_us"] = m.total_us;
    if (m.request_bytes != 0 || m.response_bytes != 0) {
        j["request_bytes"] = m.request_bytes;
        j["response_bytes"] = m.response_bytes;
    }
    j["card_bytes"] = m.card_bytes;
    return j;
}

}  // namespace

std::string comparison_to_json(const ComparisonReport& report) {
    nlohmann::ordered_json j;
    j["schemes"] = nlohmann::ordered_json::array();
    for (const SchemeReport& s : report.schemes) {
        j["schemes"].push_back({{"name", s.name},
                                {"registration_us", s.registration_us},
                                {"login_auth_us", s.login_auth_us},
                                {"storage_bytes", s.storage_bytes},
                                {"traffic_bytes", s.traffic_bytes}});
    }
    j["measured"] = {{"registration", measurement_json(report.measured_registration)},
                     {"login_auth", measurement_json(report.measured_login_auth)},
                     {"password_update", measurement_json(report.measured_password_update)}};
    j["advertised"] = {{"registration_us", report.advertised_registration_us},
                       {"login_auth_us", report.advertised_login_auth_us},
                       {"storage_bytes", report.advertised_storage_bytes},
                       {"traffic_bytes", report.advertised_traffic_bytes}};
    j["ratios"] = {{"execution_saving", report.execution_saving},
                   {"traffic_saving", report.traffic_saving},
                   {"headline_execution_saving", report.headline_execution_saving},
                   {"headline_traffic_saving", report.headline_traffic_saving}};
    j["energy"] = {{"execution_mj", report.execution_energy_mj},
                   {"communication_mj", report.communication_energy_mj},
                   {"volts", 1.0},
                   {"amps", 1.0},
                   {"data_rate_bits_per_sec", 6'100'000.0}};
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

std::string comparison_to_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "name,registration_us,login_auth_us,storage_bytes,traffic_bytes\n";
    for (const SchemeReport& s : report.schemes) {
        std::string name = s.name;
        std::replace(name.begin(), name.end(), ',', ';');
        out << name << ',' << s.registration_us << ',' << s.login_auth_us << ','
            << s.storage_bytes << ',' << s.traffic_bytes << '\n';
    }
    out << "this design (measured),"
        << report.measured_registration.total_us << ','
        << report.measured_login_auth.total_us << ','
        << report.measured_login_auth.card_bytes << ','
        << report.measured_login_auth.request_bytes + report.measured_login_auth.response_bytes
        << '\n';
    return out.str();
}

}  // namespace msauth
