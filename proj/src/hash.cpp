#include "msauth/hash.hpp"

#include <openssl/evp.h>

#include "msauth/errors.hpp"

namespace msauth {

Value sha256(std::span<const std::uint8_t> input) {
    if (input.empty())
        throw ProtocolError(Reject::width_violation, "hash input must be non-empty");
    std::vector<std::uint8_t> digest(kDigestWidth);
    unsigned int len = 0;
    if (EVP_Digest(input.data(), input.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != kDigestWidth)
        throw std::runtime_error("sha256 backend failure");
    return Value(std::move(digest));
}

Value sha256(std::span<const std::uint8_t> input, HashCounter& counter) {
    Value out = sha256(input);
    ++counter.invocations;
    return out;
}

}  // namespace msauth
