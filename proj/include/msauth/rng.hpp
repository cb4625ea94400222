#pragma once

#include <cstdint>
#include <random>

#include "msauth/bytes.hpp"

namespace msauth {

// Source of fresh protocol values (salts, nonces, master secrets), all 8 bytes.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual Value random_value(std::size_t width) = 0;
};

// Deterministic source: raw mt19937_64 output, 8 big-endian bytes per draw.
// The engine's output sequence is pinned by the standard, so a given seed
// reproduces the same byte stream on any implementation. draws() feeds the
// cross-process replay cursor.
class SeededRng : public RandomSource {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    Value random_value(std::size_t width) override;
    void discard(std::uint64_t draws) { engine_.discard(draws); draws_ += draws; }
    std::uint64_t draws() const { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

// Test helper: hands out a scripted sequence of values.
class FixedRng : public RandomSource {
public:
    explicit FixedRng(std::vector<Value> values) : values_(std::move(values)) {}

    Value random_value(std::size_t width) override;

private:
    std::vector<Value> values_;
    std::size_t next_ = 0;
};

}  // namespace msauth
