#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msauth/hash.hpp"

namespace msauth {

// Unit prices for the three primitive families that dominate runtime in this
// class of protocol. Everything is integer microseconds so analytical totals
// compare exactly, with no float drift.
struct OpCostTable {
    std::uint64_t hash_us = 580;
    std::uint64_t ec_point_us = 37'720;
    std::uint64_t chaotic_map_us = 21'040;
};

struct OpCounts {
    std::uint64_t hashes = 0;
    std::uint64_t ec_points = 0;
    std::uint64_t chaotic_maps = 0;
};

std::uint64_t analytical_us(const OpCounts& counts, const OpCostTable& table = {});

// Field widths used by the storage and traffic accounting. Identities, random
// nonces and other short values share one width.
struct FieldSizes {
    std::size_t hash = 32;
    std::size_t short_value = 8;  // identity / nonce / similar
    std::size_t timestamp = 4;
    std::size_t chaotic_map = 16;
    std::size_t ec_point = 64;
};

struct FieldCounts {
    std::size_t hashes = 0;
    std::size_t short_values = 0;
    std::size_t timestamps = 0;
    std::size_t chaotic_maps = 0;
    std::size_t ec_points = 0;
};

std::size_t field_bytes(const FieldCounts& counts, const FieldSizes& sizes = {});

// Published cost profile of one authentication scheme: op counts per phase
// plus the field inventories behind its storage and traffic figures.
struct SchemeProfile {
    std::string name;
    OpCounts registration;
    OpCounts login_auth;
    FieldCounts card_storage;
    FieldCounts traffic;
};

// The comparison set this design was benchmarked against, each row restated
// from the cited scheme's own operation inventory. The final row is this
// protocol's advertised accounting.
std::vector<SchemeProfile> baseline_profiles();

// Live measurement: runs the phase inside a fresh deterministic deployment
// and reports hash-counter deltas rather than advertised numbers.
enum class Phase { registration, login_auth, password_update };

struct PhaseMeasurement {
    OpCounts user_side;   // card / reader
    OpCounts infra_side;  // authority and servers
    OpCounts total;
    std::uint64_t total_us = 0;       // total counts priced by the table
    std::size_t request_bytes = 0;    // login_auth only
    std::size_t response_bytes = 0;   // login_auth only
    std::size_t card_bytes = 0;       // bytes persisted on the issued card
};

PhaseMeasurement measure_phase(Phase phase, const OpCostTable& table = {});

// Energy. Execution: volts * amps * time. Transmission: volts * amps * the
// serialization time of the message at the given link rate. Both in mJ.
// Callers must pass the electrical operating point explicitly.
double execution_energy_mj(double volts, double amps, std::uint64_t execution_us);
double communication_energy_mj(double volts, double amps, std::size_t message_bytes,
                               double data_rate_bits_per_sec = 6'100'000.0);

struct SchemeReport {
    std::string name;
    std::uint64_t registration_us = 0;
    std::uint64_t login_auth_us = 0;
    std::size_t storage_bytes = 0;
    std::size_t traffic_bytes = 0;
};

struct ComparisonReport {
    std::vector<SchemeReport> schemes;  // priced baseline_profiles()

    PhaseMeasurement measured_registration;
    PhaseMeasurement measured_login_auth;
    PhaseMeasurement measured_password_update;

    // Advertised self-accounting for this protocol, priced from its profile
    // row, kept separate from the measured figures so disagreements show.
    std::uint64_t advertised_registration_us = 0;
    std::uint64_t advertised_login_auth_us = 0;
    std::size_t advertised_storage_bytes = 0;
    std::size_t advertised_traffic_bytes = 0;

    // Savings ratios against the strongest baseline on each axis.
    double execution_saving = 0.0;      // vs the fastest baseline login+auth
    double traffic_saving = 0.0;        // vs the leanest baseline traffic
    // Headline figures this design is marketed under, for cross-checking.
    double headline_execution_saving = 0.44;
    double headline_traffic_saving = 0.38;

    double execution_energy_mj = 0.0;      // V = I = 1, measured login+auth time
    double communication_energy_mj = 0.0;  // V = I = 1, measured wire bytes

    std::vector<std::string> notes;
};

ComparisonReport build_comparison(const OpCostTable& table = {});

std::string comparison_to_json(const ComparisonReport& report);
std::string comparison_to_csv(const ComparisonReport& report);

}  // namespace msauth
