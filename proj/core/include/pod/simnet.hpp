#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "pod/accountability.hpp"
#include "pod/bidset.hpp"
#include "pod/client.hpp"
#include "pod/registry.hpp"
#include "pod/replica.hpp"

namespace pod::sim {

// Adversarial replica behaviors. Byzantine kinds send wrong content;
// omission kinds only drop or delay what an honest replica would send.
enum class AdversaryKind {
    Honest,
    EquivocateSn,  // conflicting (tx, ts) at equal sn to different clients
    StaleTs,       // one vote with a timestamp below its own previous one
    OmitTo,        // drop messages to a target subset of clients
    OmitAll,       // drop every outgoing message
    CrashAt,       // stop processing and sending after a given round
    DelayMax,      // deliver everything at the network bound
};

const char* adversaryKindName(AdversaryKind k);
bool isByzantine(AdversaryKind k);
bool isOmissionLike(AdversaryKind k);

struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::Honest;
    Round crashRound = 0;                  // CrashAt
    std::vector<std::uint32_t> omitTargets;  // OmitTo: client indices
};

struct Action {
    enum class Kind { Connect, Write };
    Round round = 0;
    Kind kind = Kind::Write;
    std::uint32_t client = 0;
    Bytes arg;
};

struct BidsetRunSpec {
    Round t0 = 5;
    Round Delta = 3;
    Bytes ssid = "A1/";
    bidset::SequencerBehavior behavior = bidset::SequencerBehavior::Honest;
    Bytes censorTarget;                 // raw bid bytes
    std::map<std::uint32_t, Bytes> bids;  // bidder client index -> bid bytes
    std::uint32_t sequencerClient = 0;
    std::vector<std::uint32_t> consumers;
    std::uint64_t sequencerKeySeed = 777;
};

struct SimConfig {
    FaultProfile profile;
    SchemeId scheme = SchemeId::HmacTest;
    Bytes sid = "sim";
    Round delta = 1;   // base actual delay, >= 1
    Round jitter = 0;  // extra per-message delay drawn from [0, jitter]
    Round DeltaBound = 0;  // 0 -> delta + jitter
    std::uint64_t seed = 1;
    Round maxRounds = 30;
    std::uint32_t numClients = 2;
    bool heartbeatSkipOpt = false;
    bool snapshotsEveryRound = true;
    // Clients are streaming from round 0; late joiners use Connect actions.
    bool preConnected = true;
    std::map<std::uint32_t, AdversarySpec> adversaries;  // replica id -> behavior
    Round staleTrigger = 4;
    std::vector<Action> actions;
    std::optional<BidsetRunSpec> bidset;

    Round maxDelay() const { return DeltaBound ? DeltaBound : delta + jitter; }
};

struct Snapshot {
    std::uint32_t client = 0;
    Round round = 0;
    ReadResult view;
};

// A vote message put on the wire: the raw material for transcripts.
struct SentVote {
    Round round = 0;
    ReplicaId from = 0;
    std::uint32_t toClient = 0;
    Vote vote;
};

struct TranscriptFilter {
    // nullopt selects everything; an empty set selects nothing.
    std::optional<std::set<ReplicaId>> replicas;
    std::optional<std::set<std::uint32_t>> clients;
    Round fromRound = 0;
    Round toRound = ~Round{0};
};

struct ConsumerOutcome {
    std::uint32_t client = 0;
    bidset::ConsumerResult result;
    std::vector<bidset::BidsMessage> equivocations;
};

class SimReplica;
class SimClientSlot;

// Deterministic discrete-round simulator: one instance per (config, seed).
// Within a round: deliver due messages in seeded order, fire scheduled
// actions, drive bidset roles, snapshot reads, then every replica's
// end-of-round heartbeat.
class Simulation {
public:
    explicit Simulation(SimConfig config);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    void run();

    const SimConfig& config() const { return config_; }
    const Registry& registry() const { return keyRing_.registry; }
    const KeyRing& keyRing() const { return keyRing_; }
    Round currentRound() const { return round_; }

    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    const std::vector<SentVote>& sentVotes() const { return sentVotes_; }
    const std::vector<std::pair<Bytes, Round>>& honestWrites() const { return honestWrites_; }

    PodClient& client(std::uint32_t idx);
    // Null for adversarial replicas.
    const Replica* honestReplicaCore(std::uint32_t idx) const;

    std::set<ReplicaId> byzantineReplicas() const;
    std::set<ReplicaId> faultyReplicas() const;

    const std::optional<Bytes>& sequencerPk() const { return sequencerPk_; }
    std::optional<Round> sequencerPublishRound() const;
    std::vector<ConsumerOutcome> consumerOutcomes() const;

    Transcript extractTranscript(const TranscriptFilter& filter = {}) const;

    const std::string& traceJsonl() const { return trace_; }
    std::uint64_t traceHash() const;

    // Internal plumbing shared with the replica/client adapters.
    void enqueueFrame(bool fromReplica, std::uint32_t fromIdx, bool toReplica, std::uint32_t toIdx,
                      const Bytes& frame, std::optional<Round> delayOverride);
    void recordSentVote(ReplicaId from, std::uint32_t toClient, const Vote& vote);
    void recordDrop(ReplicaId from, std::uint32_t toClient);
    void traceEvent(std::string_view ev, std::string_view actor, std::string_view detail);
    Round rngDelay();
    std::uint64_t rngDraw(std::uint64_t bound);

private:
    struct Message {
        bool fromReplica;
        std::uint32_t fromIdx;
        bool toReplica;
        std::uint32_t toIdx;
        Bytes frame;
        Round sendRound;
        std::uint64_t seq;
    };

    void validateConfig() const;
    void deliver(const Message& m);
    void fireAction(const Action& a);
    void pollBidset(Round round);
    void snapshotReads(Round round);

    SimConfig config_;
    KeyRing keyRing_;
    std::mt19937_64 rng_;
    Round round_ = 0;
    std::uint64_t msgSeq_ = 0;
    std::map<Round, std::vector<Message>> pending_;

    std::vector<std::unique_ptr<SimReplica>> replicas_;
    std::vector<std::unique_ptr<SimClientSlot>> clients_;

    std::optional<Bytes> sequencerPk_;
    std::unique_ptr<bidset::Sequencer> sequencer_;
    std::vector<std::pair<std::uint32_t, std::unique_ptr<bidset::Consumer>>> consumers_;

    std::vector<Snapshot> snapshots_;
    std::vector<SentVote> sentVotes_;
    std::vector<std::pair<Bytes, Round>> honestWrites_;
    std::string trace_;
};

}  // namespace pod::sim
