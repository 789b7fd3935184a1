#include <doctest.h>

#include <algorithm>
#include <random>

#include "pod/types.hpp"

using namespace pod;

TEST_CASE("medianOf matches the protocol index") {
    CHECK(medianOf(std::vector<Round>{7}) == 7);
    CHECK(medianOf(std::vector<Round>{1, 2, 3, 4}) == 3);
    CHECK(medianOf(std::vector<Round>{2, 2, 3, 4, 5, 6, 7}) == 4);
    CHECK_THROWS_AS((void)medianOf(std::vector<Round>{}), PreconditionError);
}

TEST_CASE("medianOf agrees with a sort-then-index oracle") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        std::vector<Round> values(1 + rng() % 20);
        for (auto& v : values) v = rng() % 1000;
        std::vector<Round> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        // Oracle: sort a fresh copy and read the floor(len/2) element.
        std::vector<Round> oracle = values;
        std::sort(oracle.begin(), oracle.end());
        CHECK(medianOf(sorted) == oracle[oracle.size() / 2]);
    }
}

TEST_CASE("fault profile resilience bound") {
    FaultProfile p = checkProfile(9, 1, 1);
    CHECK(p.alpha == 7);
    CHECK(checkProfile(5, 0, 1).alpha == 4);
    CHECK_THROWS_AS((void)checkProfile(8, 1, 1), ConfigError);
    CHECK_THROWS_AS((void)checkProfile(0, 0, 0), ConfigError);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        std::uint32_t beta = rng() % 4;
        std::uint32_t gamma = rng() % 4;
        std::uint32_t n = 5 * beta + 3 * gamma + 1 + rng() % 10;
        FaultProfile profile = checkProfile(n, beta, gamma);
        CHECK(profile.alpha + profile.beta + profile.gamma == profile.n);
    }
}

TEST_CASE("MaxRound ordering puts infinity last") {
    std::vector<MaxRound> values{MaxRound::infinity(), MaxRound(3), MaxRound(1), MaxRound::infinity(),
                                 MaxRound(2)};
    std::sort(values.begin(), values.end());
    CHECK(values[0] == MaxRound(1));
    CHECK(values[2] == MaxRound(3));
    CHECK(values[3].isInfinite());
    CHECK(MaxRound(5) < MaxRound::infinity());
    CHECK(MaxRound::infinity() <= MaxRound::infinity());
    CHECK_FALSE(MaxRound::infinity() < MaxRound::infinity());
    CHECK(roundToString(MaxRound::infinity()) == "inf");
    CHECK(roundToString(MaxRound(12)) == "12");
}

TEST_CASE("heartbeat transactions are per-round distinct and recognizable") {
    CHECK(isHeartbeatTx(heartbeatTx(0)));
    CHECK(isHeartbeatTx(heartbeatTx(123456)));
    CHECK(heartbeatTx(5) != heartbeatTx(6));
    CHECK(heartbeatTx(7).size() == 10);
    CHECK_FALSE(isHeartbeatTx("HB"));           // too short
    CHECK_FALSE(isHeartbeatTx("HBxxxxxxxxx"));  // 11 bytes
    CHECK_FALSE(isHeartbeatTx("ABcdefghij"));
}

TEST_CASE("vote wire encoding round-trips") {
    Vote v;
    v.tx = "payload";
    v.ts = 42;
    v.sn = 7;
    v.sigma = "sig-bytes";
    v.replica = 3;
    auto decoded = decodeVoteWire(encodeVoteWire(v));
    REQUIRE(decoded.has_value());
    CHECK(*decoded == v);
    CHECK_FALSE(decodeVoteWire("garbage").has_value());
}
