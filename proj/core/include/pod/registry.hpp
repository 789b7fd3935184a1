#pragma once

#include <vector>

#include "pod/crypto.hpp"
#include "pod/types.hpp"

namespace pod {

// Shared PKI view: the replica set, their registered public keys, the session
// identifier and the fault profile every client-side computation uses.
struct Registry {
    FaultProfile profile;
    SchemeId schemeId = SchemeId::HmacTest;
    Bytes sid;
    std::vector<Bytes> replicaPks;  // indexed by ReplicaId, size == profile.n

    const SignatureScheme& sigScheme() const { return scheme(schemeId); }

    bool knownReplica(ReplicaId id) const { return id < replicaPks.size(); }

    Bytes voteSigningPayload(const Vote& v) const {
        return encodeVoteBody({sid, v.tx, v.ts, v.sn});
    }

    bool verifyVote(const Vote& v) const {
        if (!knownReplica(v.replica)) return false;
        return sigScheme().verify(replicaPks[v.replica], voteSigningPayload(v), v.sigma);
    }
};

// Key material for one protocol instance: registry plus the replica secret
// keys. Only test fixtures and the local harnesses hold all secrets at once.
struct KeyRing {
    Registry registry;
    std::vector<KeyPair> replicaKeys;
};

KeyRing makeKeyRing(const FaultProfile& profile, SchemeId schemeId, const Bytes& sid,
                    std::uint64_t keySeed = 1);

}  // namespace pod
