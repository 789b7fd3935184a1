#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "pod/registry.hpp"
#include "pod/stats.hpp"
#include "pod/types.hpp"

namespace pod {

enum class VoteOutcome {
    Accepted,
    BadSignature,   // signature does not verify; vote unattributable, dropped
    SnAhead,        // sequence number ahead of the expected one; backlogged
    SnBehind,       // sequence number already consumed; dropped
    StaleTs,        // timestamp below the replica's most recent; accountable
    ConflictingTs,  // second, different timestamp for the same tx; accountable
};

const char* voteOutcomeName(VoteOutcome o);

struct RejectedVote {
    Vote vote;
    VoteOutcome reason;
};

// The vote-acceptance state machine shared by clients and the validator:
// per-replica expected sequence number and most-recent timestamp, the
// per-transaction timestamp table and both certificates.
//
// apply() is atomic: state changes only when every check passes, so the
// certificates a client hands out always replay cleanly.
class VoteLedger {
public:
    explicit VoteLedger(const Registry& registry);

    VoteOutcome apply(const Vote& vote);

    const std::vector<Round>& mrt() const { return mrt_; }
    const std::vector<SeqNum>& nextSn() const { return nextSn_; }
    const std::map<Bytes, std::map<ReplicaId, Round>>& tsps() const { return tsps_; }
    const std::map<ReplicaId, Vote>& cPp() const { return cPp_; }
    const std::map<Bytes, TxCertificate>& cTxAll() const { return cTxAll_; }
    const Registry& registry() const { return *registry_; }

private:
    const Registry* registry_;
    std::vector<Round> mrt_;
    std::vector<SeqNum> nextSn_;
    std::map<Bytes, std::map<ReplicaId, Round>> tsps_;
    std::map<ReplicaId, Vote> cPp_;
    std::map<Bytes, TxCertificate> cTxAll_;
};

class ClientTransport {
public:
    virtual ~ClientTransport() = default;
    virtual void sendToReplica(ReplicaId replica, const Bytes& frame) = 0;
};

struct ClientConfig {
    bool filterHeartbeats = true;
    // An adversarial replica could park unbounded out-of-order votes; cap the
    // backlog and shed the oldest.
    std::size_t backlogCapPerReplica = 10000;
};

// The streaming pod client: validates and orders incoming votes, maintains
// the trace table, and computes reads on demand from live state.
class PodClient {
public:
    PodClient(const Registry& registry, ClientTransport* transport, ClientConfig config = {});

    // The ledger points back into registry_.
    PodClient(const PodClient&) = delete;
    PodClient& operator=(const PodClient&) = delete;

    // Sends CONNECT to every replica; the replicas reply with a full replay.
    void connectAll();

    // pod interface
    void write(const Bytes& tx);
    ReadResult read() const;
    ReadResult readRaw(bool filterHeartbeats) const;

    // Feed one incoming VOTE. Returns the outcome of the vote itself;
    // backlogged votes are drained automatically once their gap closes.
    VoteOutcome onVote(const Vote& vote);
    // Feed a raw frame from a replica connection. Non-VOTE frames and
    // undecodable payloads are ignored.
    void onFrame(const Bytes& frame);

    const VoteLedger& ledger() const { return ledger_; }
    const std::vector<RejectedVote>& evidence() const { return evidence_; }
    std::size_t backlogDropped() const { return backlogDropped_; }
    std::size_t backlogSize(ReplicaId replica) const;

    // Number of distinct replicas whose vote on tx has been accepted.
    std::size_t voteCount(const Bytes& tx) const;

private:
    VoteOutcome applyAndRecord(const Vote& vote);
    void drainBacklog(ReplicaId replica);

    Registry registry_;
    ClientTransport* transport_;
    ClientConfig config_;
    VoteLedger ledger_;
    std::map<ReplicaId, std::map<SeqNum, Vote>> backlog_;
    std::vector<RejectedVote> evidence_;
    std::size_t backlogDropped_ = 0;
};

// Monotone view transform over two reads by the same client (old first):
// keeps every old trace, adds new transactions, adopts updated values only
// when they tighten (rMin up, rMax down, rConf not receding), and never lets
// rPerf move backwards.
ReadResult monotoneMerge(const ReadResult& oldView, const ReadResult& newView);

}  // namespace pod
