#include <doctest.h>

#include "lemma_oracle.hpp"
#include "pod/stats.hpp"

using namespace pod;
using namespace podtest;

namespace {

std::map<ReplicaId, Round> tsMap(std::vector<std::pair<ReplicaId, Round>> entries) {
    return {entries.begin(), entries.end()};
}

}  // namespace

TEST_CASE("minPossibleTs worked examples") {
    SUBCASE("profile (5,0,1), one missing replica filled from mrt") {
        FaultProfile p = checkProfile(5, 0, 1);
        auto ts = tsMap({{0, 3}, {1, 5}, {2, 7}, {3, 9}});
        std::vector<Round> mrt{3, 5, 7, 9, 4};  // replica 4 missing, mrt 4
        CHECK(minPossibleTs(ts, mrt, p) == 5);
        CHECK(oracleMinPossibleTs(ts, mrt, p) == 5);
    }
    SUBCASE("profile (9,1,1), eight voters") {
        FaultProfile p = checkProfile(9, 1, 1);
        auto ts = tsMap({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}});
        std::vector<Round> mrt{1, 2, 3, 4, 5, 6, 7, 8, 9};  // replica 8 missing, mrt 9
        CHECK(minPossibleTs(ts, mrt, p) == 3);
        CHECK(oracleMinPossibleTs(ts, mrt, p) == 3);
    }
    SUBCASE("all replicas voted the same round") {
        FaultProfile p = checkProfile(9, 1, 1);
        std::map<ReplicaId, Round> ts;
        std::vector<Round> mrt(9, 42);
        for (ReplicaId r = 0; r < 9; ++r) ts[r] = 42;
        CHECK(minPossibleTs(ts, mrt, p) == 42);
    }
}

TEST_CASE("maxPossibleTs worked examples") {
    SUBCASE("profile (5,0,1), four voters") {
        FaultProfile p = checkProfile(5, 0, 1);
        auto ts = tsMap({{0, 3}, {1, 5}, {2, 7}, {3, 9}});
        CHECK(maxPossibleTs(ts, p) == MaxRound(9));
        CHECK(oracleMaxPossibleTs(ts, p) == MaxRound(9));
    }
    SUBCASE("all nine voted the same round") {
        FaultProfile p = checkProfile(9, 1, 1);
        std::map<ReplicaId, Round> ts;
        for (ReplicaId r = 0; r < 9; ++r) ts[r] = 17;
        CHECK(maxPossibleTs(ts, p) == MaxRound(17));
    }
    SUBCASE("too few voters gives infinity") {
        FaultProfile p = checkProfile(5, 0, 1);
        auto ts = tsMap({{0, 3}, {1, 4}});
        CHECK(maxPossibleTs(ts, p).isInfinite());
        CHECK(oracleMaxPossibleTs(ts, p).isInfinite());
    }
}

TEST_CASE("computePastPerfectRound worked examples") {
    SUBCASE("fresh client") {
        FaultProfile p = checkProfile(9, 1, 1);
        CHECK(computePastPerfectRound(std::vector<Round>(9, 0), p) == 0);
    }
    SUBCASE("profile (9,1,1), mrt 10..18") {
        FaultProfile p = checkProfile(9, 1, 1);
        std::vector<Round> mrt{10, 11, 12, 13, 14, 15, 16, 17, 18};
        CHECK(computePastPerfectRound(mrt, p) == 12);
        CHECK(oraclePastPerfect(mrt, p) == 12);
    }
}

TEST_CASE("confirmedRound needs an alpha quorum and takes the sorted median") {
    FaultProfile p = checkProfile(9, 1, 1);
    std::map<ReplicaId, Round> ts;
    std::vector<Round> values{2, 2, 3, 4, 5, 6, 7};
    for (ReplicaId r = 0; r < values.size(); ++r) ts[r] = values[r];
    CHECK(confirmedRound(ts, p) == 4);

    ts.erase(6);  // alpha-1 votes
    CHECK_FALSE(confirmedRound(ts, p).has_value());
}

TEST_CASE("statistics match the closed-form index oracle on random instances") {
    const std::vector<FaultProfile> profiles{checkProfile(5, 0, 1), checkProfile(9, 1, 1),
                                             checkProfile(13, 2, 0), checkProfile(7, 0, 2)};
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const FaultProfile& p = profiles[i % profiles.size()];
        RandomInstance inst = randomInstance(rng, p);
        CHECK(minPossibleTs(inst.txTs, inst.mrt, p) == oracleMinPossibleTs(inst.txTs, inst.mrt, p));
        CHECK(maxPossibleTs(inst.txTs, p) == oracleMaxPossibleTs(inst.txTs, p));
        CHECK(computePastPerfectRound(inst.mrt, p) == oraclePastPerfect(inst.mrt, p));
    }
}

TEST_CASE("computeTxSet assembles traces and filters heartbeats") {
    FaultProfile p = checkProfile(5, 0, 1);
    std::map<Bytes, std::map<ReplicaId, Round>> tsps;
    std::vector<Round> mrt{8, 8, 8, 8, 8};
    for (ReplicaId r = 0; r < 4; ++r) tsps["tx1"][r] = 5;
    for (ReplicaId r = 0; r < 5; ++r) tsps[heartbeatTx(8)][r] = 8;

    auto filtered = computeTxSet(tsps, mrt, p, true);
    CHECK(filtered.size() == 1);
    REQUIRE(filtered.count("tx1"));
    const TransactionTrace& trace = filtered.at("tx1");
    CHECK(trace.rConf == 5);
    CHECK(trace.rMin <= 5);
    CHECK(MaxRound(5) <= trace.rMax);

    auto raw = computeTxSet(tsps, mrt, p, false);
    CHECK(raw.size() == 2);
    CHECK(raw.count(heartbeatTx(8)) == 1);
    CHECK(raw.at(heartbeatTx(8)).rConf == 8);
}
