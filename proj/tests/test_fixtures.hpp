#pragma once

// Shared fixtures: a keyring with signing helpers and a hand-driven replica
// harness for tests that do not need the full simulator.

#include <functional>
#include <vector>

#include "pod/client.hpp"
#include "pod/registry.hpp"
#include "pod/replica.hpp"

namespace podtest {

using namespace pod;

struct Fixture {
    explicit Fixture(FaultProfile profile, Bytes sid = "test-sid",
                     SchemeId scheme = SchemeId::HmacTest)
        : ring(makeKeyRing(profile, scheme, sid)) {}

    const Registry& registry() const { return ring.registry; }

    Vote makeVote(ReplicaId replica, const Bytes& tx, Round ts, SeqNum sn) const {
        Vote v;
        v.tx = tx;
        v.ts = ts;
        v.sn = sn;
        v.replica = replica;
        v.sigma = ring.registry.sigScheme().sign(
            ring.replicaKeys[replica].sk,
            encodeVoteBody({ring.registry.sid, tx, ts, sn}));
        return v;
    }

    KeyRing ring;
};

// A replica wired to an in-memory outbox, with a settable current round.
struct BenchReplica {
    explicit BenchReplica(const Fixture& fx, ReplicaId id, ReplicaOptions options = {})
        : replica(id, fx.registry().sigScheme(), fx.ring.replicaKeys[id].sk, fx.registry().sid,
                  [this] { return round; },
                  [this](Replica::ClientRef c, const Vote& v) { sent.push_back({c, v}); }, options) {}

    Round round = 0;
    std::vector<std::pair<Replica::ClientRef, Vote>> sent;
    Replica replica;
};

}  // namespace podtest
