#include "msauth/rng.hpp"

#include "msauth/errors.hpp"

namespace msauth {

Value SeededRng::random_value(std::size_t width) {
    if (width != kIdWidth)
        throw ProtocolError(Reject::width_violation, "random values are 8 bytes wide");
    std::uint64_t word = engine_();
    ++draws_;
    std::vector<std::uint8_t> out(kIdWidth);
    for (std::size_t i = 0; i < kIdWidth; ++i)
        out[i] = static_cast<std::uint8_t>(word >> (56 - 8 * i));
    return Value(std::move(out));
}

Value FixedRng::random_value(std::size_t width) {
    if (next_ >= values_.size())
        throw std::logic_error("FixedRng exhausted");
    const Value& v = values_[next_++];
    if (v.width() != width)
        throw ProtocolError(Reject::width_violation, "scripted value width mismatch");
    return v;
}

}  // namespace msauth
