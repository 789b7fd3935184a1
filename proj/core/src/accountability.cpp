#include "pod/accountability.hpp"

#include <algorithm>
#include <map>

#include "pod/bidset.hpp"
#include "pod/stats.hpp"

namespace pod {

void Transcript::addAll(const Certificates& certs) {
    for (const auto& [replica, vote] : certs.cPp) add(vote);
    for (const auto& [tx, txCert] : certs.cTxAll) {
        for (const auto& [replica, vote] : txCert) add(vote);
    }
}

std::set<ReplicaId> identify(const Registry& registry, const Transcript& transcript) {
    std::map<std::pair<ReplicaId, SeqNum>, std::vector<const Vote*>> groups;
    for (const Vote& vote : transcript.votes) {
        if (!registry.verifyVote(vote)) continue;  // unverifiable votes carry no blame
        groups[{vote.replica, vote.sn}].push_back(&vote);
    }
    std::set<ReplicaId> culpable;
    for (const auto& [key, votes] : groups) {
        for (std::size_t i = 1; i < votes.size(); ++i) {
            if (votes[i]->tx != votes[0]->tx || votes[i]->ts != votes[0]->ts) {
                culpable.insert(key.first);
                break;
            }
        }
    }
    return culpable;
}

const char* sequencerVerdictName(SequencerVerdict v) {
    switch (v) {
        case SequencerVerdict::Misbehaved: return "misbehaved";
        case SequencerVerdict::NotMisbehaved: return "not-misbehaved";
        case SequencerVerdict::NotValidEvidence: return "not-valid-evidence";
    }
    return "?";
}

SequencerVerdict identifySequencer(const Registry& registry, const Bytes& sequencerPk,
                                   const Bytes& ssid, const SequencerEvidence& evidence, Round t0,
                                   Round Delta) {
    const FaultProfile& profile = registry.profile;

    if (!registry.sigScheme().verify(
            sequencerPk, bidset::bidsSignPayload(ssid, evidence.bidSet, evidence.cBid),
            evidence.sigma)) {
        return SequencerVerdict::NotValidEvidence;
    }

    // The published past-perfection certificate must be made of real votes
    // and must actually prove a past-perfect round past the bid deadline.
    std::vector<Round> timestamps;
    timestamps.reserve(evidence.cBid.size() + profile.beta);
    for (const auto& [replica, vote] : evidence.cBid) {
        if (!registry.verifyVote(vote)) return SequencerVerdict::Misbehaved;
        timestamps.push_back(vote.ts);
    }
    std::sort(timestamps.begin(), timestamps.end());
    timestamps.insert(timestamps.begin(), profile.beta, Round{0});
    Round rPerf = 0;
    if (!timestamps.empty()) {
        if (timestamps.size() > profile.alpha) timestamps.resize(profile.alpha);
        rPerf = medianOf(timestamps);
    }
    if (rPerf < t0 + Delta) return SequencerVerdict::Misbehaved;

    // The accusation itself: a full transaction certificate whose median
    // timestamp put the transaction inside the protected window.
    if (evidence.cTx.size() < profile.alpha) return SequencerVerdict::NotValidEvidence;
    const Bytes& targetTx = evidence.cTx.begin()->second.tx;
    std::vector<Round> txTimestamps;
    txTimestamps.reserve(evidence.cTx.size());
    for (const auto& [replica, vote] : evidence.cTx) {
        if (vote.tx != targetTx) return SequencerVerdict::NotValidEvidence;
        if (!registry.verifyVote(vote)) return SequencerVerdict::NotValidEvidence;
        txTimestamps.push_back(vote.ts);
    }
    std::sort(txTimestamps.begin(), txTimestamps.end());
    const Round rConfTarget = medianOf(txTimestamps);

    const bool inBidSet =
        std::find(evidence.bidSet.begin(), evidence.bidSet.end(), targetTx) != evidence.bidSet.end();
    if (rConfTarget <= t0 + Delta && !inBidSet) return SequencerVerdict::Misbehaved;
    return SequencerVerdict::NotMisbehaved;
}

}  // namespace pod
