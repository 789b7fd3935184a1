#include "pod/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

namespace pod {

namespace {

void ensureSodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
    });
}

Bytes seedBytes(std::uint64_t seed, std::size_t len) {
    unsigned char in[8];
    for (int i = 0; i < 8; ++i) in[i] = static_cast<unsigned char>(seed >> (56 - 8 * i));
    Bytes out(len, '\0');
    crypto_generichash(reinterpret_cast<unsigned char*>(out.data()), len, in, sizeof(in), nullptr, 0);
    return out;
}

// Test scheme: signature is a MAC over the message under a per-replica secret,
// and pk == sk so the verifier holds the secret. Deterministic and fast.
class HmacTestScheme final : public SignatureScheme {
public:
    SchemeId id() const override { return SchemeId::HmacTest; }
    const char* name() const override { return "hmac-test"; }

    KeyPair keygen(std::uint64_t seed) const override {
        ensureSodium();
        Bytes sk = seedBytes(seed, crypto_auth_KEYBYTES);
        return {sk, sk};
    }

    KeyPair keygenRandom() const override {
        ensureSodium();
        Bytes sk(crypto_auth_KEYBYTES, '\0');
        randombytes_buf(sk.data(), sk.size());
        return {sk, sk};
    }

    Bytes sign(const Bytes& sk, std::string_view msg) const override {
        ensureSodium();
        if (sk.size() != crypto_auth_KEYBYTES) throw KeyError("hmac-test: bad secret key size");
        Bytes sig(crypto_auth_BYTES, '\0');
        crypto_auth(reinterpret_cast<unsigned char*>(sig.data()),
                    reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                    reinterpret_cast<const unsigned char*>(sk.data()));
        return sig;
    }

    bool verify(const Bytes& pk, std::string_view msg, std::string_view sig) const noexcept override {
        if (pk.size() != crypto_auth_KEYBYTES || sig.size() != crypto_auth_BYTES) return false;
        return crypto_auth_verify(reinterpret_cast<const unsigned char*>(sig.data()),
                                  reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                                  reinterpret_cast<const unsigned char*>(pk.data())) == 0;
    }
};

class Ed25519Scheme final : public SignatureScheme {
public:
    SchemeId id() const override { return SchemeId::Ed25519; }
    const char* name() const override { return "ed25519"; }

    KeyPair keygen(std::uint64_t seed) const override {
        ensureSodium();
        Bytes seed32 = seedBytes(seed, crypto_sign_SEEDBYTES);
        Bytes pk(crypto_sign_PUBLICKEYBYTES, '\0');
        Bytes sk(crypto_sign_SECRETKEYBYTES, '\0');
        crypto_sign_seed_keypair(reinterpret_cast<unsigned char*>(pk.data()),
                                 reinterpret_cast<unsigned char*>(sk.data()),
                                 reinterpret_cast<const unsigned char*>(seed32.data()));
        return {sk, pk};
    }

    KeyPair keygenRandom() const override {
        ensureSodium();
        Bytes pk(crypto_sign_PUBLICKEYBYTES, '\0');
        Bytes sk(crypto_sign_SECRETKEYBYTES, '\0');
        crypto_sign_keypair(reinterpret_cast<unsigned char*>(pk.data()),
                            reinterpret_cast<unsigned char*>(sk.data()));
        return {sk, pk};
    }

    Bytes sign(const Bytes& sk, std::string_view msg) const override {
        ensureSodium();
        if (sk.size() != crypto_sign_SECRETKEYBYTES) throw KeyError("ed25519: bad secret key size");
        Bytes sig(crypto_sign_BYTES, '\0');
        crypto_sign_detached(reinterpret_cast<unsigned char*>(sig.data()), nullptr,
                             reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                             reinterpret_cast<const unsigned char*>(sk.data()));
        return sig;
    }

    bool verify(const Bytes& pk, std::string_view msg, std::string_view sig) const noexcept override {
        if (pk.size() != crypto_sign_PUBLICKEYBYTES || sig.size() != crypto_sign_BYTES) return false;
        return crypto_sign_verify_detached(reinterpret_cast<const unsigned char*>(sig.data()),
                                           reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                                           reinterpret_cast<const unsigned char*>(pk.data())) == 0;
    }
};

}  // namespace

const SignatureScheme& scheme(SchemeId id) {
    static const HmacTestScheme hmac;
    static const Ed25519Scheme ed;
    switch (id) {
        case SchemeId::HmacTest: return hmac;
        case SchemeId::Ed25519: return ed;
    }
    throw KeyError("unknown signature scheme id");
}

}  // namespace pod
