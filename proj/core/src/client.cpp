#include "pod/client.hpp"

namespace pod {

const char* voteOutcomeName(VoteOutcome o) {
    switch (o) {
        case VoteOutcome::Accepted: return "accepted";
        case VoteOutcome::BadSignature: return "bad-signature";
        case VoteOutcome::SnAhead: return "sn-ahead";
        case VoteOutcome::SnBehind: return "sn-behind";
        case VoteOutcome::StaleTs: return "stale-ts";
        case VoteOutcome::ConflictingTs: return "conflicting-ts";
    }
    return "?";
}

VoteLedger::VoteLedger(const Registry& registry)
    : registry_(&registry), mrt_(registry.profile.n, 0), nextSn_(registry.profile.n, 0) {}

VoteOutcome VoteLedger::apply(const Vote& vote) {
    if (!registry_->verifyVote(vote)) return VoteOutcome::BadSignature;
    const ReplicaId r = vote.replica;
    if (vote.sn != nextSn_[r]) {
        return vote.sn > nextSn_[r] ? VoteOutcome::SnAhead : VoteOutcome::SnBehind;
    }
    if (vote.ts < mrt_[r]) return VoteOutcome::StaleTs;
    auto txIt = tsps_.find(vote.tx);
    if (txIt != tsps_.end()) {
        auto tsIt = txIt->second.find(r);
        if (tsIt != txIt->second.end() && tsIt->second != vote.ts) return VoteOutcome::ConflictingTs;
    }
    nextSn_[r] = vote.sn + 1;
    mrt_[r] = vote.ts;
    tsps_[vote.tx][r] = vote.ts;
    cPp_[r] = vote;
    cTxAll_[vote.tx][r] = vote;
    return VoteOutcome::Accepted;
}

PodClient::PodClient(const Registry& registry, ClientTransport* transport, ClientConfig config)
    : registry_(registry), transport_(transport), config_(config), ledger_(registry_) {}

void PodClient::connectAll() {
    if (!transport_) return;
    Bytes frame = encodeFrame(FrameTag::Connect, {});
    for (ReplicaId r = 0; r < registry_.profile.n; ++r) transport_->sendToReplica(r, frame);
}

void PodClient::write(const Bytes& tx) {
    if (!transport_) return;
    Bytes frame = encodeFrame(FrameTag::Write, tx);
    for (ReplicaId r = 0; r < registry_.profile.n; ++r) transport_->sendToReplica(r, frame);
}

ReadResult PodClient::read() const { return readRaw(config_.filterHeartbeats); }

ReadResult PodClient::readRaw(bool filterHeartbeats) const {
    ReadResult out;
    out.data.traces =
        computeTxSet(ledger_.tsps(), ledger_.mrt(), registry_.profile, filterHeartbeats);
    out.data.rPerf = computePastPerfectRound(ledger_.mrt(), registry_.profile);
    out.data.heartbeatsFiltered = filterHeartbeats;
    out.certs.cPp = ledger_.cPp();
    out.certs.cTxAll = ledger_.cTxAll();
    return out;
}

VoteOutcome PodClient::onVote(const Vote& vote) {
    VoteOutcome outcome = applyAndRecord(vote);
    if (outcome == VoteOutcome::SnAhead) {
        auto& pending = backlog_[vote.replica];
        pending.emplace(vote.sn, vote);
        if (pending.size() > config_.backlogCapPerReplica) {
            pending.erase(pending.begin());
            ++backlogDropped_;
        }
    } else if (outcome == VoteOutcome::Accepted) {
        drainBacklog(vote.replica);
    }
    return outcome;
}

void PodClient::onFrame(const Bytes& frame) {
    auto decoded = tryDecodeFrame(frame);
    if (!decoded || decoded->first.tag != FrameTag::Vote) return;
    auto vote = decodeVoteWire(decoded->first.payload);
    if (!vote) return;
    onVote(*vote);
}

VoteOutcome PodClient::applyAndRecord(const Vote& vote) {
    VoteOutcome outcome = ledger_.apply(vote);
    if (outcome == VoteOutcome::StaleTs || outcome == VoteOutcome::ConflictingTs) {
        evidence_.push_back({vote, outcome});
    }
    return outcome;
}

void PodClient::drainBacklog(ReplicaId replica) {
    auto it = backlog_.find(replica);
    if (it == backlog_.end()) return;
    auto& pending = it->second;
    while (!pending.empty()) {
        auto first = pending.begin();
        const SeqNum expected = ledger_.nextSn()[replica];
        if (first->first < expected) {
            pending.erase(first);  // superseded while parked
            continue;
        }
        if (first->first > expected) break;
        Vote vote = first->second;
        pending.erase(first);
        // A rejection here freezes the replica's stream: nextSn stays put and
        // everything behind it stays backlogged.
        if (applyAndRecord(vote) != VoteOutcome::Accepted) break;
    }
    if (pending.empty()) backlog_.erase(it);
}

std::size_t PodClient::backlogSize(ReplicaId replica) const {
    auto it = backlog_.find(replica);
    return it == backlog_.end() ? 0 : it->second.size();
}

std::size_t PodClient::voteCount(const Bytes& tx) const {
    auto it = ledger_.tsps().find(tx);
    return it == ledger_.tsps().end() ? 0 : it->second.size();
}

ReadResult monotoneMerge(const ReadResult& oldView, const ReadResult& newView) {
    ReadResult merged = oldView;  // step 1: carry forward old traces and their certificates

    for (const auto& [tx, newTrace] : newView.data.traces) {
        auto oldIt = merged.data.traces.find(tx);
        if (oldIt == merged.data.traces.end()) {
            // step 2: transaction first seen in the new view
            merged.data.traces.emplace(tx, newTrace);
            auto certIt = newView.certs.cTxAll.find(tx);
            if (certIt != newView.certs.cTxAll.end()) merged.certs.cTxAll[tx] = certIt->second;
            continue;
        }
        // step 3: adopt the new values only when every bound tightened
        const TransactionTrace& oldTrace = oldIt->second;
        const bool confOk = !oldTrace.rConf.has_value() ||
                            (newTrace.rConf.has_value() && *newTrace.rConf >= *oldTrace.rConf);
        if (newTrace.rMin >= oldTrace.rMin && newTrace.rMax <= oldTrace.rMax && confOk) {
            oldIt->second = newTrace;
            auto certIt = newView.certs.cTxAll.find(tx);
            if (certIt != newView.certs.cTxAll.end()) merged.certs.cTxAll[tx] = certIt->second;
        }
    }

    // step 4: past-perfect round never moves backwards
    if (newView.data.rPerf > oldView.data.rPerf) {
        merged.data.rPerf = newView.data.rPerf;
        merged.certs.cPp = newView.certs.cPp;
    }
    return merged;
}

}  // namespace pod
