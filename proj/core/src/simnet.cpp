#include "pod/simnet.hpp"

#include <algorithm>
#include <unordered_set>

#include "pod/codec.hpp"

namespace pod::sim {

namespace {

std::string addrStr(bool replica, std::uint32_t idx) {
    return (replica ? "R" : "C") + std::to_string(idx);
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

const char* adversaryKindName(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::Honest: return "honest";
        case AdversaryKind::EquivocateSn: return "equivocate_sn";
        case AdversaryKind::StaleTs: return "stale_ts";
        case AdversaryKind::OmitTo: return "omit_to";
        case AdversaryKind::OmitAll: return "omit_all";
        case AdversaryKind::CrashAt: return "crash_at";
        case AdversaryKind::DelayMax: return "delay_max";
    }
    return "?";
}

bool isByzantine(AdversaryKind k) {
    return k == AdversaryKind::EquivocateSn || k == AdversaryKind::StaleTs;
}

bool isOmissionLike(AdversaryKind k) {
    return k == AdversaryKind::OmitTo || k == AdversaryKind::OmitAll ||
           k == AdversaryKind::CrashAt || k == AdversaryKind::DelayMax;
}

// ---------------------------------------------------------------------------
// Replica adapters. Byzantine replicas are alternate state machines over the
// same wire interface; their votes go through the same codec and signatures.

class SimReplica {
public:
    virtual ~SimReplica() = default;
    virtual void preConnect(std::uint32_t client) = 0;
    virtual void onFrame(std::uint32_t fromClient, const Frame& frame) = 0;
    virtual void onRoundEnd(Round round) = 0;
    virtual const Replica* honestCore() const { return nullptr; }
};

// Honest protocol logic; omission-side behaviors only change what actually
// leaves the replica (drop, delay, or stop entirely).
class HonestSimReplica final : public SimReplica {
public:
    HonestSimReplica(Simulation& sim, ReplicaId id, const KeyRing& ring, AdversarySpec spec,
                     ReplicaOptions options)
        : sim_(&sim),
          id_(id),
          spec_(std::move(spec)),
          omitTargets_(spec_.omitTargets.begin(), spec_.omitTargets.end()),
          core_(id, ring.registry.sigScheme(), ring.replicaKeys[id].sk, ring.registry.sid,
                [this] { return sim_->currentRound(); },
                [this](Replica::ClientRef c, const Vote& v) {
                    sendVote(static_cast<std::uint32_t>(c), v);
                },
                options) {}

    void preConnect(std::uint32_t client) override { core_.onConnect(client); }

    void onFrame(std::uint32_t fromClient, const Frame& frame) override {
        if (crashed()) return;
        if (frame.tag == FrameTag::Connect) {
            core_.onConnect(fromClient);
        } else if (frame.tag == FrameTag::Write) {
            core_.onWrite(frame.payload);
        }
    }

    void onRoundEnd(Round round) override {
        if (!crashed()) core_.onRoundEnd(round);
    }

    const Replica* honestCore() const override {
        return spec_.kind == AdversaryKind::Honest ? &core_ : nullptr;
    }

private:
    bool crashed() const {
        return spec_.kind == AdversaryKind::CrashAt && sim_->currentRound() >= spec_.crashRound;
    }

    void sendVote(std::uint32_t client, const Vote& vote) {
        if (spec_.kind == AdversaryKind::OmitAll ||
            (spec_.kind == AdversaryKind::OmitTo && omitTargets_.count(client))) {
            sim_->recordDrop(id_, client);
            return;
        }
        std::optional<Round> delay;
        if (spec_.kind == AdversaryKind::DelayMax) delay = sim_->config().maxDelay();
        sim_->recordSentVote(id_, client, vote);
        sim_->enqueueFrame(true, id_, false, client, encodeFrame(FrameTag::Vote, encodeVoteWire(vote)),
                           delay);
    }

    Simulation* sim_;
    ReplicaId id_;
    AdversarySpec spec_;
    std::unordered_set<std::uint32_t> omitTargets_;
    Replica core_;
};

// Keeps two internally consistent logs and shows a different one to each half
// of the clients: same sequence numbers, different transaction bytes.
class EquivocateSimReplica final : public SimReplica {
public:
    EquivocateSimReplica(Simulation& sim, ReplicaId id, const KeyRing& ring)
        : sim_(&sim), id_(id), ring_(&ring) {}

    void preConnect(std::uint32_t client) override { connected_.insert(client); }

    void onFrame(std::uint32_t fromClient, const Frame& frame) override {
        if (frame.tag == FrameTag::Connect) {
            connected_.insert(fromClient);
            const auto& chain = groupB(fromClient) ? chainB_ : chainA_;
            for (const Vote& v : chain) send(fromClient, v);
        } else if (frame.tag == FrameTag::Write) {
            const Bytes& tx = frame.payload;
            if (isHeartbeatTx(tx) || seen_.count(tx)) return;
            voteBoth(tx);
        }
    }

    void onRoundEnd(Round round) override { voteBoth(heartbeatTx(round)); }

private:
    static bool groupB(std::uint32_t client) { return client % 2 == 1; }

    Vote makeVote(const Bytes& tx, Round ts, SeqNum sn) const {
        Vote v;
        v.tx = tx;
        v.ts = ts;
        v.sn = sn;
        v.replica = id_;
        v.sigma = ring_->registry.sigScheme().sign(
            ring_->replicaKeys[id_].sk, encodeVoteBody({ring_->registry.sid, tx, ts, sn}));
        return v;
    }

    void voteBoth(const Bytes& tx) {
        const Round ts = sim_->currentRound();
        Vote a = makeVote(tx, ts, nextSn_);
        Vote b = makeVote(tx + '\xEE', ts, nextSn_);
        chainA_.push_back(a);
        chainB_.push_back(b);
        seen_.insert(tx);
        ++nextSn_;
        for (std::uint32_t c : connected_) send(c, groupB(c) ? b : a);
    }

    void send(std::uint32_t client, const Vote& vote) {
        sim_->recordSentVote(id_, client, vote);
        sim_->enqueueFrame(true, id_, false, client, encodeFrame(FrameTag::Vote, encodeVoteWire(vote)),
                           std::nullopt);
    }

    Simulation* sim_;
    ReplicaId id_;
    const KeyRing* ring_;
    SeqNum nextSn_ = 0;
    std::unordered_set<Bytes> seen_;
    std::vector<Vote> chainA_, chainB_;
    std::set<std::uint32_t> connected_;
};

// Honest-shaped chain with one deliberately stale timestamp at the trigger
// round. Clients reject that vote and the stream freezes there for them.
class StaleTsSimReplica final : public SimReplica {
public:
    StaleTsSimReplica(Simulation& sim, ReplicaId id, const KeyRing& ring, Round trigger)
        : sim_(&sim), id_(id), ring_(&ring), trigger_(trigger < 2 ? 2 : trigger) {}

    void preConnect(std::uint32_t client) override { connected_.insert(client); }

    void onFrame(std::uint32_t fromClient, const Frame& frame) override {
        if (frame.tag == FrameTag::Connect) {
            connected_.insert(fromClient);
            for (const Vote& v : chain_) send(fromClient, v);
        } else if (frame.tag == FrameTag::Write) {
            const Bytes& tx = frame.payload;
            if (isHeartbeatTx(tx) || seen_.count(tx)) return;
            vote(tx, sim_->currentRound());
        }
    }

    void onRoundEnd(Round round) override {
        const Round ts = round == trigger_ ? round - 2 : round;
        vote(heartbeatTx(round), ts);
    }

private:
    void vote(const Bytes& tx, Round ts) {
        Vote v;
        v.tx = tx;
        v.ts = ts;
        v.sn = nextSn_++;
        v.replica = id_;
        v.sigma = ring_->registry.sigScheme().sign(
            ring_->replicaKeys[id_].sk, encodeVoteBody({ring_->registry.sid, tx, ts, v.sn}));
        chain_.push_back(v);
        seen_.insert(tx);
        for (std::uint32_t c : connected_) send(c, v);
    }

    void send(std::uint32_t client, const Vote& vote) {
        sim_->recordSentVote(id_, client, vote);
        sim_->enqueueFrame(true, id_, false, client, encodeFrame(FrameTag::Vote, encodeVoteWire(vote)),
                           std::nullopt);
    }

    Simulation* sim_;
    ReplicaId id_;
    const KeyRing* ring_;
    Round trigger_;
    SeqNum nextSn_ = 0;
    std::unordered_set<Bytes> seen_;
    std::vector<Vote> chain_;
    std::set<std::uint32_t> connected_;
};

// ---------------------------------------------------------------------------

class SimClientSlot {
public:
    class Transport final : public ClientTransport {
    public:
        Transport(Simulation& sim, std::uint32_t idx) : sim_(&sim), idx_(idx) {}
        void sendToReplica(ReplicaId replica, const Bytes& frame) override {
            sim_->enqueueFrame(false, idx_, true, replica, frame, std::nullopt);
        }

    private:
        Simulation* sim_;
        std::uint32_t idx_;
    };

    SimClientSlot(Simulation& sim, std::uint32_t idx, const Registry& registry)
        : transport(sim, idx), client(registry, &transport) {}

    Transport transport;
    PodClient client;
    bool connected = false;
};

// ---------------------------------------------------------------------------

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      keyRing_(makeKeyRing(config_.profile, config_.scheme, config_.sid)),
      rng_(config_.seed) {
    validateConfig();

    ReplicaOptions options;
    options.heartbeatSkipWhenActive = config_.heartbeatSkipOpt;
    for (ReplicaId id = 0; id < config_.profile.n; ++id) {
        AdversarySpec spec;
        if (auto it = config_.adversaries.find(id); it != config_.adversaries.end()) spec = it->second;
        switch (spec.kind) {
            case AdversaryKind::EquivocateSn:
                replicas_.push_back(std::make_unique<EquivocateSimReplica>(*this, id, keyRing_));
                break;
            case AdversaryKind::StaleTs:
                replicas_.push_back(
                    std::make_unique<StaleTsSimReplica>(*this, id, keyRing_, config_.staleTrigger));
                break;
            default:
                replicas_.push_back(
                    std::make_unique<HonestSimReplica>(*this, id, keyRing_, spec, options));
        }
    }

    for (std::uint32_t c = 0; c < config_.numClients; ++c) {
        clients_.push_back(std::make_unique<SimClientSlot>(*this, c, keyRing_.registry));
        if (config_.preConnected) {
            clients_.back()->connected = true;
            for (auto& r : replicas_) r->preConnect(c);
        }
    }

    if (config_.bidset) {
        const BidsetRunSpec& spec = *config_.bidset;
        KeyPair seqKeys = keyRing_.registry.sigScheme().keygen(spec.sequencerKeySeed);
        sequencerPk_ = seqKeys.pk;
        bidset::BidsetConfig bcfg;
        bcfg.t0 = spec.t0;
        bcfg.Delta = spec.Delta;
        bcfg.ssid = spec.ssid;
        bcfg.sequencerPk = seqKeys.pk;
        sequencer_ = std::make_unique<bidset::Sequencer>(clients_[spec.sequencerClient]->client, bcfg,
                                                         seqKeys.sk, spec.behavior, spec.censorTarget);
        for (std::uint32_t c : spec.consumers) {
            consumers_.emplace_back(c, std::make_unique<bidset::Consumer>(clients_[c]->client, bcfg));
        }
    }
}

Simulation::~Simulation() = default;

void Simulation::validateConfig() const {
    if (config_.delta < 1) throw ConfigError("simnet delta must be >= 1");
    if (config_.DeltaBound && config_.DeltaBound < config_.delta + config_.jitter) {
        throw ConfigError("simnet Delta bound below delta + jitter");
    }
    if (config_.numClients < 1) throw ConfigError("simnet needs at least one client");
    std::uint32_t byz = 0, omission = 0;
    for (const auto& [id, spec] : config_.adversaries) {
        if (id >= config_.profile.n) throw ConfigError("adversary replica id out of range");
        if (isByzantine(spec.kind)) ++byz;
        if (isOmissionLike(spec.kind)) ++omission;
        for (std::uint32_t t : spec.omitTargets) {
            if (t >= config_.numClients) throw ConfigError("omit target client out of range");
        }
    }
    if (byz > config_.profile.beta) throw ConfigError("more Byzantine behaviors than beta");
    if (omission > config_.profile.gamma) throw ConfigError("more omission behaviors than gamma");
    if (config_.bidset) {
        const BidsetRunSpec& b = *config_.bidset;
        if (b.sequencerClient >= config_.numClients) throw ConfigError("sequencer client out of range");
        for (std::uint32_t c : b.consumers) {
            if (c >= config_.numClients) throw ConfigError("consumer client out of range");
        }
        for (const auto& [c, bid] : b.bids) {
            if (c >= config_.numClients) throw ConfigError("bidder client out of range");
        }
        if (b.Delta < 1) throw ConfigError("bidset Delta must be >= 1");
    }
    for (const Action& a : config_.actions) {
        if (a.client >= config_.numClients) throw ConfigError("action client out of range");
    }
}

void Simulation::run() {
    for (round_ = 0; round_ <= config_.maxRounds; ++round_) {
        std::vector<Message> due;
        while (!pending_.empty() && pending_.begin()->first <= round_) {
            auto& batch = pending_.begin()->second;
            due.insert(due.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
            pending_.erase(pending_.begin());
        }
        // Seeded shuffle: schedule nondeterminism is explored across seeds
        // while each run stays reproducible.
        for (std::size_t i = due.size(); i > 1; --i) {
            std::swap(due[i - 1], due[rngDraw(i)]);
        }
        for (const Message& m : due) deliver(m);

        for (const Action& a : config_.actions) {
            if (a.round == round_) fireAction(a);
        }

        if (config_.bidset) pollBidset(round_);
        if (config_.snapshotsEveryRound) snapshotReads(round_);

        for (auto& r : replicas_) r->onRoundEnd(round_);
    }
}

void Simulation::deliver(const Message& m) {
    traceEvent("dlv", addrStr(m.toReplica, m.toIdx),
               "from=" + addrStr(m.fromReplica, m.fromIdx) + " sent=" + std::to_string(m.sendRound));
    if (m.toReplica) {
        auto frame = tryDecodeFrame(m.frame);
        if (!frame) return;
        replicas_[m.toIdx]->onFrame(m.fromIdx, frame->first);
        return;
    }
    auto frame = tryDecodeFrame(m.frame);
    if (!frame || frame->first.tag != FrameTag::Vote) return;
    auto vote = decodeVoteWire(frame->first.payload);
    if (!vote) return;
    VoteOutcome outcome = clients_[m.toIdx]->client.onVote(*vote);
    traceEvent("vote", addrStr(false, m.toIdx),
               std::string(voteOutcomeName(outcome)) + " R" + std::to_string(vote->replica) + " sn=" +
                   std::to_string(vote->sn) + " ts=" + std::to_string(vote->ts) + " tx=" +
                   previewBytes(vote->tx));
}

void Simulation::fireAction(const Action& a) {
    SimClientSlot& slot = *clients_[a.client];
    if (a.kind == Action::Kind::Connect) {
        slot.connected = true;
        slot.client.connectAll();
        traceEvent("connect", addrStr(false, a.client), "");
    } else {
        slot.client.write(a.arg);
        honestWrites_.emplace_back(a.arg, round_);
        traceEvent("write", addrStr(false, a.client), "tx=" + previewBytes(a.arg));
    }
}

void Simulation::pollBidset(Round round) {
    const BidsetRunSpec& spec = *config_.bidset;
    if (round == spec.t0) {
        bidset::BidsetConfig bcfg;
        bcfg.t0 = spec.t0;
        bcfg.Delta = spec.Delta;
        bcfg.ssid = spec.ssid;
        bcfg.sequencerPk = *sequencerPk_;
        for (const auto& [clientIdx, bid] : spec.bids) {
            bidset::Bidder bidder(clients_[clientIdx]->client, bcfg);
            bidder.submitBid(bid);
            honestWrites_.emplace_back(bidset::bidTx(spec.ssid, bid), round);
            traceEvent("bid", addrStr(false, clientIdx), "bid=" + previewBytes(bid));
        }
    }
    if (sequencer_) {
        const bool wasPublished = sequencer_->published();
        sequencer_->pollRound(round);
        if (!wasPublished && sequencer_->published()) {
            traceEvent("bids_publish", addrStr(false, spec.sequencerClient),
                       "n=" + std::to_string(sequencer_->publishedBidSet().size()));
        }
    }
    for (auto& [clientIdx, consumer] : consumers_) {
        const bool had = consumer->result().has_value();
        consumer->pollRound(round);
        if (!had && consumer->result()) {
            traceEvent("result", addrStr(false, clientIdx),
                       "n=" + std::to_string(consumer->result()->bidSet.size()) +
                           " viaBids=" + (consumer->result()->fromBidsTx ? "1" : "0"));
        }
    }
}

void Simulation::snapshotReads(Round round) {
    for (std::uint32_t c = 0; c < clients_.size(); ++c) {
        if (!clients_[c]->connected) continue;
        Snapshot snap;
        snap.client = c;
        snap.round = round;
        snap.view = clients_[c]->client.read();
        traceEvent("read", addrStr(false, c),
                   "rperf=" + std::to_string(snap.view.data.rPerf) +
                       " n=" + std::to_string(snap.view.data.traces.size()));
        snapshots_.push_back(std::move(snap));
    }
}

PodClient& Simulation::client(std::uint32_t idx) { return clients_.at(idx)->client; }

const Replica* Simulation::honestReplicaCore(std::uint32_t idx) const {
    return replicas_.at(idx)->honestCore();
}

std::set<ReplicaId> Simulation::byzantineReplicas() const {
    std::set<ReplicaId> out;
    for (const auto& [id, spec] : config_.adversaries) {
        if (isByzantine(spec.kind)) out.insert(id);
    }
    return out;
}

std::set<ReplicaId> Simulation::faultyReplicas() const {
    std::set<ReplicaId> out;
    for (const auto& [id, spec] : config_.adversaries) {
        if (spec.kind != AdversaryKind::Honest) out.insert(id);
    }
    return out;
}

std::optional<Round> Simulation::sequencerPublishRound() const {
    return sequencer_ ? sequencer_->publishRound() : std::nullopt;
}

std::vector<ConsumerOutcome> Simulation::consumerOutcomes() const {
    std::vector<ConsumerOutcome> out;
    for (const auto& [clientIdx, consumer] : consumers_) {
        if (!consumer->result()) continue;
        out.push_back({clientIdx, *consumer->result(), consumer->equivocations()});
    }
    return out;
}

Transcript Simulation::extractTranscript(const TranscriptFilter& filter) const {
    Transcript t;
    for (const SentVote& sent : sentVotes_) {
        if (sent.round < filter.fromRound || sent.round > filter.toRound) continue;
        if (filter.replicas && !filter.replicas->count(sent.from)) continue;
        if (filter.clients && !filter.clients->count(sent.toClient)) continue;
        t.add(sent.vote);
    }
    return t;
}

std::uint64_t Simulation::traceHash() const { return fnv1a(trace_); }

void Simulation::enqueueFrame(bool fromReplica, std::uint32_t fromIdx, bool toReplica,
                              std::uint32_t toIdx, const Bytes& frame,
                              std::optional<Round> delayOverride) {
    Round delay = delayOverride.value_or(rngDelay());
    if (delay < 1) delay = 1;
    if (delay > config_.maxDelay()) delay = config_.maxDelay();
    Message m;
    m.fromReplica = fromReplica;
    m.fromIdx = fromIdx;
    m.toReplica = toReplica;
    m.toIdx = toIdx;
    m.frame = frame;
    m.sendRound = round_;
    m.seq = msgSeq_++;
    traceEvent("send", addrStr(fromReplica, fromIdx),
               "to=" + addrStr(toReplica, toIdx) + " dlv=" + std::to_string(round_ + delay));
    pending_[round_ + delay].push_back(std::move(m));
}

void Simulation::recordSentVote(ReplicaId from, std::uint32_t toClient, const Vote& vote) {
    sentVotes_.push_back({round_, from, toClient, vote});
}

void Simulation::recordDrop(ReplicaId from, std::uint32_t toClient) {
    traceEvent("drop", addrStr(true, from), "to=" + addrStr(false, toClient));
}

void Simulation::traceEvent(std::string_view ev, std::string_view actor, std::string_view detail) {
    trace_ += "{\"r\":" + std::to_string(round_) + ",\"ev\":\"" + std::string(ev) + "\",\"a\":\"" +
              std::string(actor) + "\",\"d\":\"" + std::string(detail) + "\"}\n";
}

Round Simulation::rngDelay() {
    return config_.delta + (config_.jitter ? rngDraw(config_.jitter + 1) : 0);
}

std::uint64_t Simulation::rngDraw(std::uint64_t bound) { return bound ? rng_() % bound : 0; }

}  // namespace pod::sim
