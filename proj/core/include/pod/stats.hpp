#pragma once

#include <map>

#include "pod/types.hpp"

namespace pod {

// Trace statistics from Algorithm-style quorum medians. `txTimestamps` holds
// the accepted timestamp per replica for one transaction; `mrt` is the
// most-recent accepted timestamp per replica (index = ReplicaId, size n).

// Fill missing replicas with their mrt, sort ascending, prepend beta zeros,
// return the median of the first alpha values. Lower-bounds the confirmed
// round any other client can ever assign to this transaction.
Round minPossibleTs(const std::map<ReplicaId, Round>& txTimestamps, const std::vector<Round>& mrt,
                    const FaultProfile& profile);

// Fill missing replicas with infinity, sort ascending, append beta infinities,
// return the median of the last alpha values.
MaxRound maxPossibleTs(const std::map<ReplicaId, Round>& txTimestamps, const FaultProfile& profile);

// Same lower-bound computation over mrt itself: bounds from below the
// confirmed round of any transaction not yet seen.
Round computePastPerfectRound(const std::vector<Round>& mrt, const FaultProfile& profile);

// Median of the received timestamps once at least alpha replicas have voted.
std::optional<Round> confirmedRound(const std::map<ReplicaId, Round>& txTimestamps,
                                    const FaultProfile& profile);

// Full trace set over a timestamp table. Heartbeat transactions are skipped
// when `filterHeartbeats` is set; the certificates are unaffected either way.
std::map<Bytes, TransactionTrace> computeTxSet(
    const std::map<Bytes, std::map<ReplicaId, Round>>& tsps, const std::vector<Round>& mrt,
    const FaultProfile& profile, bool filterHeartbeats);

}  // namespace pod
