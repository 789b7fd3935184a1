#include "pod/validator.hpp"

#include <algorithm>

#include "pod/stats.hpp"

namespace pod {

const char* validationReasonName(ValidationReason r) {
    switch (r) {
        case ValidationReason::OK: return "OK";
        case ValidationReason::BAD_SIG: return "BAD_SIG";
        case ValidationReason::SN_GAP: return "SN_GAP";
        case ValidationReason::STALE_TS: return "STALE_TS";
        case ValidationReason::DUP_TS_CONFLICT: return "DUP_TS_CONFLICT";
        case ValidationReason::TRACESET_MISMATCH: return "TRACESET_MISMATCH";
        case ValidationReason::RPERF_MISMATCH: return "RPERF_MISMATCH";
        case ValidationReason::CPP_NOT_IN_CTX: return "CPP_NOT_IN_CTX";
        case ValidationReason::CPP_NOT_MAX_SN: return "CPP_NOT_MAX_SN";
    }
    return "?";
}

ValidationResult validPod(const Registry& registry, const PodData& data, const Certificates& certs) {
    // Gather every vote in the transaction certificates, grouped per replica.
    std::map<ReplicaId, std::vector<Vote>> perReplica;
    for (const auto& [tx, txCert] : certs.cTxAll) {
        for (const auto& [replica, vote] : txCert) perReplica[replica].push_back(vote);
    }

    // Replay in increasing sequence number per replica; the interleaving
    // across replicas is irrelevant since every check is per-replica.
    VoteLedger ledger(registry);
    for (auto& [replica, votes] : perReplica) {
        std::sort(votes.begin(), votes.end(),
                  [](const Vote& a, const Vote& b) { return a.sn < b.sn; });
        for (const Vote& vote : votes) {
            switch (ledger.apply(vote)) {
                case VoteOutcome::Accepted: break;
                case VoteOutcome::BadSignature: return {false, ValidationReason::BAD_SIG};
                case VoteOutcome::SnAhead:
                case VoteOutcome::SnBehind: return {false, ValidationReason::SN_GAP};
                case VoteOutcome::StaleTs: return {false, ValidationReason::STALE_TS};
                case VoteOutcome::ConflictingTs: return {false, ValidationReason::DUP_TS_CONFLICT};
            }
        }
    }

    // D must be exactly what the replayed state recomputes, under the same
    // heartbeat-filtering convention the producing client used.
    auto traces = computeTxSet(ledger.tsps(), ledger.mrt(), registry.profile, data.heartbeatsFiltered);
    if (traces != data.traces) return {false, ValidationReason::TRACESET_MISMATCH};
    if (computePastPerfectRound(ledger.mrt(), registry.profile) != data.rPerf) {
        return {false, ValidationReason::RPERF_MISMATCH};
    }

    // Past-perfection certificate: each listed vote must appear among the
    // replayed votes and carry that replica's maximum sequence number.
    for (const auto& [replica, vote] : certs.cPp) {
        auto it = perReplica.find(replica);
        if (it == perReplica.end()) return {false, ValidationReason::CPP_NOT_IN_CTX};
        const auto& votes = it->second;  // sorted by sn above
        if (std::find(votes.begin(), votes.end(), vote) == votes.end()) {
            return {false, ValidationReason::CPP_NOT_IN_CTX};
        }
        if (vote.sn != votes.back().sn) return {false, ValidationReason::CPP_NOT_MAX_SN};
    }

    return {true, ValidationReason::OK};
}

}  // namespace pod
