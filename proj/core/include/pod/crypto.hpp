#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "pod/bytes.hpp"

namespace pod {

struct KeyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class SchemeId : std::uint8_t {
    HmacTest = 1,  // deterministic keyed-hash scheme, verifier holds the MAC secret
    Ed25519 = 2,
};

struct KeyPair {
    Bytes sk;
    Bytes pk;
};

// Signature abstraction shared by every module that signs or checks votes.
// verify() never throws: any malformed input is just an invalid signature.
class SignatureScheme {
public:
    virtual ~SignatureScheme() = default;

    virtual SchemeId id() const = 0;
    virtual const char* name() const = 0;

    virtual KeyPair keygen(std::uint64_t seed) const = 0;
    virtual KeyPair keygenRandom() const = 0;

    virtual Bytes sign(const Bytes& sk, std::string_view msg) const = 0;
    virtual bool verify(const Bytes& pk, std::string_view msg, std::string_view sig) const noexcept = 0;
};

const SignatureScheme& scheme(SchemeId id);

}  // namespace pod
