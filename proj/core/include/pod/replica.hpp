#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "pod/crypto.hpp"
#include "pod/types.hpp"

namespace pod {

// One replica state machine. The embedding (simulator or socket server) owns
// the event loop and feeds onConnect/onWrite/onRoundEnd one at a time; the
// replica never talks to other replicas.
struct ReplicaOptions {
    // Skip the end-of-round heartbeat when a vote already went out this
    // round. Off in property tests, on in benchmarks.
    bool heartbeatSkipWhenActive = false;
};

class Replica {
public:
    // Opaque client handle; meaning is up to the transport.
    using ClientRef = std::uint64_t;
    using RoundFn = std::function<Round()>;
    using SendFn = std::function<void(ClientRef, const Vote&)>;

    Replica(ReplicaId id, const SignatureScheme& scheme, Bytes secretKey, Bytes sid, RoundFn roundFn,
            SendFn sendFn, ReplicaOptions options = {});

    void onConnect(ClientRef client);
    void onWrite(const Bytes& tx);
    void onRoundEnd(Round round);
    void disconnect(ClientRef client);

    ReplicaId id() const { return id_; }
    const std::vector<Vote>& log() const { return log_; }
    std::size_t connectedCount() const { return connected_.size(); }

private:
    Vote doVote(const Bytes& tx);

    ReplicaId id_;
    const SignatureScheme* scheme_;
    Bytes sk_;
    Bytes sid_;
    RoundFn roundFn_;
    SendFn sendFn_;
    ReplicaOptions options_;

    std::vector<ClientRef> connected_;
    std::unordered_set<ClientRef> connectedSet_;
    SeqNum nextSn_ = 0;
    std::vector<Vote> log_;
    std::unordered_set<Bytes> seenTxs_;
    bool votedThisRound_ = false;
};

}  // namespace pod
