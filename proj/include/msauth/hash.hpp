#pragma once

#include <cstdint>
#include <span>

#include "msauth/bytes.hpp"

namespace msauth {

// Per-actor tally of hash invocations. Passed explicitly; never global.
struct HashCounter {
    std::uint64_t invocations = 0;
};

// SHA-256. Input must be non-empty (no protocol call site hashes nothing).
Value sha256(std::span<const std::uint8_t> input);

// Counted variant used by every protocol actor, so per-phase op budgets are
// measured rather than asserted.
Value sha256(std::span<const std::uint8_t> input, HashCounter& counter);

}  // namespace msauth
