#include "pod/replica.hpp"

#include <algorithm>

#include "pod/codec.hpp"

namespace pod {

Replica::Replica(ReplicaId id, const SignatureScheme& scheme, Bytes secretKey, Bytes sid,
                 RoundFn roundFn, SendFn sendFn, ReplicaOptions options)
    : id_(id),
      scheme_(&scheme),
      sk_(std::move(secretKey)),
      sid_(std::move(sid)),
      roundFn_(std::move(roundFn)),
      sendFn_(std::move(sendFn)),
      options_(options) {}

void Replica::onConnect(ClientRef client) {
    if (connectedSet_.insert(client).second) connected_.push_back(client);
    for (const Vote& vote : log_) sendFn_(client, vote);
}

void Replica::onWrite(const Bytes& tx) {
    // The heartbeat namespace is reserved: accepting a client write shaped
    // like a heartbeat would either duplicate a future heartbeat's tx (two
    // timestamps for one tx, an accountable fault) or force skipping it.
    if (isHeartbeatTx(tx)) return;
    if (seenTxs_.count(tx)) return;  // ignore duplicate transactions
    doVote(tx);
}

void Replica::onRoundEnd(Round round) {
    if (!(options_.heartbeatSkipWhenActive && votedThisRound_)) {
        Bytes hb = heartbeatTx(round);
        if (!seenTxs_.count(hb)) doVote(hb);
    }
    votedThisRound_ = false;
}

void Replica::disconnect(ClientRef client) {
    if (connectedSet_.erase(client) == 0) return;
    connected_.erase(std::find(connected_.begin(), connected_.end(), client));
}

Vote Replica::doVote(const Bytes& tx) {
    Vote vote;
    vote.tx = tx;
    vote.ts = roundFn_();
    vote.sn = nextSn_;
    vote.replica = id_;
    vote.sigma = scheme_->sign(sk_, encodeVoteBody({sid_, vote.tx, vote.ts, vote.sn}));
    log_.push_back(vote);
    seenTxs_.insert(tx);
    for (ClientRef client : connected_) sendFn_(client, vote);
    ++nextSn_;
    votedThisRound_ = true;
    return vote;
}

}  // namespace pod
