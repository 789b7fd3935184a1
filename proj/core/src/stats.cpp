#include "pod/stats.hpp"

#include <algorithm>

namespace pod {

namespace {

void requireProfileSized(const std::vector<Round>& mrt, const FaultProfile& profile) {
    if (mrt.size() != profile.n) throw PreconditionError("mrt table must have one entry per replica");
}

}  // namespace

Round minPossibleTs(const std::map<ReplicaId, Round>& txTimestamps, const std::vector<Round>& mrt,
                    const FaultProfile& profile) {
    requireProfileSized(mrt, profile);
    std::vector<Round> filled;
    filled.reserve(profile.n + profile.beta);
    for (ReplicaId r = 0; r < profile.n; ++r) {
        auto it = txTimestamps.find(r);
        filled.push_back(it != txTimestamps.end() ? it->second : mrt[r]);
    }
    std::sort(filled.begin(), filled.end());
    filled.insert(filled.begin(), profile.beta, Round{0});
    filled.resize(profile.alpha);  // first alpha values
    return medianOf(filled);
}

MaxRound maxPossibleTs(const std::map<ReplicaId, Round>& txTimestamps, const FaultProfile& profile) {
    std::vector<MaxRound> filled;
    filled.reserve(profile.n + profile.beta);
    for (ReplicaId r = 0; r < profile.n; ++r) {
        auto it = txTimestamps.find(r);
        filled.push_back(it != txTimestamps.end() ? MaxRound(it->second) : MaxRound::infinity());
    }
    std::sort(filled.begin(), filled.end());
    filled.insert(filled.end(), profile.beta, MaxRound::infinity());
    filled.erase(filled.begin(), filled.end() - profile.alpha);  // last alpha values
    return medianOf(filled);
}

Round computePastPerfectRound(const std::vector<Round>& mrt, const FaultProfile& profile) {
    requireProfileSized(mrt, profile);
    std::vector<Round> sorted(mrt);
    std::sort(sorted.begin(), sorted.end());
    sorted.insert(sorted.begin(), profile.beta, Round{0});
    sorted.resize(profile.alpha);
    return medianOf(sorted);
}

std::optional<Round> confirmedRound(const std::map<ReplicaId, Round>& txTimestamps,
                                    const FaultProfile& profile) {
    if (txTimestamps.size() < profile.alpha) return std::nullopt;
    std::vector<Round> timestamps;
    timestamps.reserve(txTimestamps.size());
    for (const auto& [replica, ts] : txTimestamps) timestamps.push_back(ts);
    std::sort(timestamps.begin(), timestamps.end());
    return medianOf(timestamps);
}

std::map<Bytes, TransactionTrace> computeTxSet(
    const std::map<Bytes, std::map<ReplicaId, Round>>& tsps, const std::vector<Round>& mrt,
    const FaultProfile& profile, bool filterHeartbeats) {
    std::map<Bytes, TransactionTrace> traces;
    for (const auto& [tx, perReplica] : tsps) {
        if (filterHeartbeats && isHeartbeatTx(tx)) continue;
        TransactionTrace trace;
        trace.tx = tx;
        trace.rMin = minPossibleTs(perReplica, mrt, profile);
        trace.rMax = maxPossibleTs(perReplica, profile);
        trace.rConf = confirmedRound(perReplica, profile);
        traces.emplace(tx, std::move(trace));
    }
    return traces;
}

}  // namespace pod
