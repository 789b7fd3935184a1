#include <doctest.h>

#include "test_fixtures.hpp"

using namespace pod;
using namespace podtest;

namespace {
Fixture fx(checkProfile(5, 0, 1));

PodClient freshClient(ClientConfig cfg = {}) { return PodClient(fx.registry(), nullptr, cfg); }
}  // namespace

TEST_CASE("first vote is accepted and updates mrt and nextSn") {
    PodClient c = freshClient();
    CHECK(c.onVote(fx.makeVote(0, "tx", 5, 0)) == VoteOutcome::Accepted);
    CHECK(c.ledger().mrt()[0] == 5);
    CHECK(c.ledger().nextSn()[0] == 1);
    CHECK(c.ledger().cPp().at(0).ts == 5);
    CHECK(c.ledger().cTxAll().at("tx").at(0).ts == 5);
}

TEST_CASE("invalid signature is dropped without state change") {
    PodClient c = freshClient();
    Vote v = fx.makeVote(0, "tx", 5, 0);
    v.sigma[0] ^= 1;
    CHECK(c.onVote(v) == VoteOutcome::BadSignature);
    CHECK(c.ledger().nextSn()[0] == 0);
    CHECK(c.evidence().empty());
}

TEST_CASE("out-of-order votes are backlogged and drained in sequence") {
    PodClient c = freshClient();
    Vote v3 = fx.makeVote(1, "c", 7, 3);
    CHECK(c.onVote(v3) == VoteOutcome::SnAhead);
    CHECK(c.backlogSize(1) == 1);
    CHECK(c.onVote(fx.makeVote(1, "b", 6, 2)) == VoteOutcome::SnAhead);
    CHECK(c.onVote(fx.makeVote(1, "z", 5, 1)) == VoteOutcome::SnAhead);
    CHECK(c.ledger().nextSn()[1] == 0);
    // sn 0 closes the gap; everything drains in order.
    CHECK(c.onVote(fx.makeVote(1, "a", 5, 0)) == VoteOutcome::Accepted);
    CHECK(c.ledger().nextSn()[1] == 4);
    CHECK(c.ledger().mrt()[1] == 7);
    CHECK(c.backlogSize(1) == 0);
}

TEST_CASE("stale timestamp is rejected, retained as evidence, and freezes the stream") {
    PodClient c = freshClient();
    CHECK(c.onVote(fx.makeVote(2, "a", 5, 0)) == VoteOutcome::Accepted);
    Vote stale = fx.makeVote(2, "b", 4, 1);
    CHECK(c.onVote(stale) == VoteOutcome::StaleTs);
    REQUIRE(c.evidence().size() == 1);
    CHECK(c.evidence()[0].reason == VoteOutcome::StaleTs);
    CHECK(c.evidence()[0].vote == stale);
    // Atomic rejection: no partial state advanced.
    CHECK(c.ledger().nextSn()[2] == 1);
    CHECK(c.ledger().mrt()[2] == 5);
    // Later votes stay parked behind the frozen stream.
    CHECK(c.onVote(fx.makeVote(2, "c", 6, 2)) == VoteOutcome::SnAhead);
    CHECK(c.ledger().nextSn()[2] == 1);
}

TEST_CASE("conflicting timestamp for the same tx is rejected with evidence") {
    PodClient c = freshClient();
    CHECK(c.onVote(fx.makeVote(3, "dup", 5, 0)) == VoteOutcome::Accepted);
    CHECK(c.onVote(fx.makeVote(3, "x", 6, 1)) == VoteOutcome::Accepted);
    Vote conflict = fx.makeVote(3, "dup", 7, 2);
    CHECK(c.onVote(conflict) == VoteOutcome::ConflictingTs);
    REQUIRE(c.evidence().size() == 1);
    CHECK(c.evidence()[0].reason == VoteOutcome::ConflictingTs);
    CHECK(c.ledger().mrt()[3] == 6);
    CHECK(c.ledger().tsps().at("dup").at(3) == 5);
}

TEST_CASE("re-sent identical timestamp for the same tx is fine") {
    // A replica resending its log after a reconnect repeats (tx, ts) pairs at
    // fresh sns only if it misbehaves; equal-ts duplicates at the same sn are
    // simply behind nextSn and dropped.
    PodClient c = freshClient();
    Vote v = fx.makeVote(0, "a", 5, 0);
    CHECK(c.onVote(v) == VoteOutcome::Accepted);
    CHECK(c.onVote(v) == VoteOutcome::SnBehind);
    CHECK(c.ledger().nextSn()[0] == 1);
}

TEST_CASE("fresh client reads an empty pod") {
    PodClient c = freshClient();
    ReadResult r = c.read();
    CHECK(r.data.traces.empty());
    CHECK(r.data.rPerf == 0);
    CHECK(r.certs.cPp.empty());
}

TEST_CASE("heartbeats advance mrt and cPp but are filtered from read()") {
    PodClient c = freshClient();
    for (ReplicaId rep = 0; rep < 5; ++rep) {
        CHECK(c.onVote(fx.makeVote(rep, heartbeatTx(3), 3, 0)) == VoteOutcome::Accepted);
    }
    ReadResult r = c.read();
    CHECK(r.data.traces.empty());
    CHECK(r.data.rPerf == 3);
    CHECK(r.data.heartbeatsFiltered);
    CHECK(r.certs.cPp.size() == 5);
    CHECK(r.certs.cTxAll.count(heartbeatTx(3)) == 1);

    ReadResult raw = c.readRaw(false);
    CHECK(raw.data.traces.count(heartbeatTx(3)) == 1);
    CHECK_FALSE(raw.data.heartbeatsFiltered);
}

TEST_CASE("trace set confirmation at the alpha quorum") {
    PodClient c = freshClient();  // alpha = 4
    for (ReplicaId rep = 0; rep < 3; ++rep) {
        CHECK(c.onVote(fx.makeVote(rep, "t", 4 + rep, 0)) == VoteOutcome::Accepted);
    }
    CHECK_FALSE(c.read().data.traces.at("t").rConf.has_value());
    CHECK(c.onVote(fx.makeVote(3, "t", 9, 0)) == VoteOutcome::Accepted);
    ReadResult r = c.read();
    REQUIRE(r.data.traces.at("t").rConf.has_value());
    CHECK(*r.data.traces.at("t").rConf == 6);  // index 2 of [4,5,6,9]
    CHECK(c.voteCount("t") == 4);
}

TEST_CASE("backlog is bounded and sheds the oldest entries") {
    ClientConfig cfg;
    cfg.backlogCapPerReplica = 10;
    PodClient c = freshClient(cfg);
    for (SeqNum sn = 100; sn < 150; ++sn) {
        c.onVote(fx.makeVote(0, "x" + std::to_string(sn), 5, sn));
    }
    CHECK(c.backlogSize(0) == 10);
    CHECK(c.backlogDropped() == 40);
}

TEST_CASE("monotone merge: idempotent, tightening, rPerf keeps maximum") {
    PodClient c = freshClient();
    for (ReplicaId rep = 0; rep < 4; ++rep) c.onVote(fx.makeVote(rep, "t", 5, 0));
    ReadResult v1 = c.read();
    for (ReplicaId rep = 0; rep < 5; ++rep) c.onVote(fx.makeVote(rep, heartbeatTx(9), 9, 1));
    ReadResult v2 = c.read();

    SUBCASE("merge(V, V) = V") {
        ReadResult m = monotoneMerge(v1, v1);
        CHECK(m.data == v1.data);
        CHECK(m.certs == v1.certs);
    }

    SUBCASE("later view adopted when bounds tighten") {
        ReadResult m = monotoneMerge(v1, v2);
        CHECK(m.data.rPerf == v2.data.rPerf);
        CHECK(m.data.traces.at("t").rMin >= v1.data.traces.at("t").rMin);
        CHECK(m.data.traces.at("t").rMax <= v1.data.traces.at("t").rMax);
    }

    SUBCASE("stale view cannot drag values backwards") {
        ReadResult m = monotoneMerge(v2, v1);
        CHECK(m.data.rPerf == v2.data.rPerf);
        CHECK(m.data.traces.at("t") == v2.data.traces.at("t"));
    }

    SUBCASE("hand-built loosened view is not adopted") {
        ReadResult loosened = v2;
        loosened.data.traces.at("t").rMin = 0;
        ReadResult m = monotoneMerge(v2, loosened);
        CHECK(m.data.traces.at("t").rMin == v2.data.traces.at("t").rMin);
    }
}
