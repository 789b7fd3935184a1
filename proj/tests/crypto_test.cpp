#include <doctest.h>

#include <random>

#include "pod/crypto.hpp"

using namespace pod;

namespace {

Bytes randomMsg(std::mt19937_64& rng) {
    Bytes out(1 + rng() % 64, '\0');
    for (auto& c : out) c = static_cast<char>(rng() & 0xff);
    return out;
}

void checkScheme(const SignatureScheme& s) {
    std::mt19937_64 rng(99);

    SUBCASE("sign/verify correctness") {
        KeyPair kp = s.keygen(1);
        for (int i = 0; i < 50; ++i) {
            Bytes m = randomMsg(rng);
            CHECK(s.verify(kp.pk, m, s.sign(kp.sk, m)));
        }
    }

    SUBCASE("rejects different message") {
        KeyPair kp = s.keygen(2);
        for (int i = 0; i < 1000; ++i) {
            Bytes m = randomMsg(rng);
            Bytes m2 = randomMsg(rng);
            if (m == m2) continue;
            CHECK_FALSE(s.verify(kp.pk, m2, s.sign(kp.sk, m)));
        }
    }

    SUBCASE("rejects unrelated key") {
        for (int i = 0; i < 1000; ++i) {
            KeyPair kp = s.keygen(100 + i);
            KeyPair other = s.keygen(5000 + i);
            Bytes m = randomMsg(rng);
            CHECK_FALSE(s.verify(other.pk, m, s.sign(kp.sk, m)));
        }
    }

    SUBCASE("rejects zero-filled signature") {
        KeyPair kp = s.keygen(3);
        Bytes m = "message";
        Bytes zeros(s.sign(kp.sk, m).size(), '\0');
        CHECK_FALSE(s.verify(kp.pk, m, zeros));
    }

    SUBCASE("rejects single bit flips") {
        KeyPair kp = s.keygen(4);
        for (int i = 0; i < 1000; ++i) {
            Bytes m = randomMsg(rng);
            Bytes sig = s.sign(kp.sk, m);
            std::size_t bit = rng() % (sig.size() * 8);
            sig[bit / 8] ^= static_cast<char>(1u << (bit % 8));
            CHECK_FALSE(s.verify(kp.pk, m, sig));
        }
    }

    SUBCASE("verify never throws on garbage") {
        KeyPair kp = s.keygen(5);
        CHECK_FALSE(s.verify(kp.pk, "m", ""));
        CHECK_FALSE(s.verify("", "m", "sig"));
        CHECK_FALSE(s.verify(kp.pk, "m", "short"));
    }

    SUBCASE("deterministic keygen, malformed key errors") {
        CHECK(s.keygen(7).pk == s.keygen(7).pk);
        CHECK(s.keygen(7).pk != s.keygen(8).pk);
        CHECK_THROWS_AS((void)s.sign("bad", "m"), KeyError);
    }
}

}  // namespace

TEST_CASE("hmac test scheme") { checkScheme(scheme(SchemeId::HmacTest)); }

TEST_CASE("ed25519 scheme") { checkScheme(scheme(SchemeId::Ed25519)); }

TEST_CASE("schemes are distinct and named") {
    CHECK(scheme(SchemeId::HmacTest).id() == SchemeId::HmacTest);
    CHECK(scheme(SchemeId::Ed25519).id() == SchemeId::Ed25519);
    CHECK(Bytes(scheme(SchemeId::HmacTest).name()) != Bytes(scheme(SchemeId::Ed25519).name()));
}
