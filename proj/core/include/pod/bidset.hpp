#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pod/client.hpp"
#include "pod/registry.hpp"
#include "pod/types.hpp"

namespace pod::bidset {

struct BidsetConfig {
    Round t0 = 0;
    Round Delta = 1;  // synchrony bound in rounds, >= 1
    Bytes ssid;
    Bytes sequencerPk;
};

// The sequencer's published output, carried inside one pod transaction.
struct BidsMessage {
    std::vector<Bytes> bidSet;  // full pod tx bytes of each bid, sorted
    std::map<ReplicaId, Vote> cBid;
    Bytes sigma;
};

// Bid transactions are the raw bid prefixed with the sub-session id; the
// BIDS transaction carries a tag byte after the ssid so it cannot collide
// with a bid of the same instance unless the sequencer's signature is forged.
Bytes bidTx(const Bytes& ssid, const Bytes& bid);
Bytes encodeBidsTx(const Bytes& ssid, const BidsMessage& msg);
std::optional<BidsMessage> tryParseBidsTx(const Bytes& ssid, const Bytes& tx);

// Canonical payload the sequencer signs: ssid, then B sorted, then cBid.
Bytes bidsSignPayload(const Bytes& ssid, const std::vector<Bytes>& bidSet,
                      const std::map<ReplicaId, Vote>& cBid);

class Bidder {
public:
    Bidder(PodClient& client, BidsetConfig config) : client_(&client), config_(std::move(config)) {}

    // Called at round t0 by honest bidders.
    void submitBid(const Bytes& bid) { client_->write(bidTx(config_.ssid, bid)); }

private:
    PodClient* client_;
    BidsetConfig config_;
};

enum class SequencerBehavior {
    Honest,
    Censor,      // drops one target bid from B
    Silent,      // never publishes
    Equivocate,  // publishes two different signed bid sets
};

class Sequencer {
public:
    Sequencer(PodClient& client, BidsetConfig config, Bytes secretKey,
              SequencerBehavior behavior = SequencerBehavior::Honest, Bytes censorTarget = {});

    // Drive once per round after deliveries; publishes at most once.
    void pollRound(Round round);

    bool published() const { return published_; }
    std::optional<Round> publishRound() const { return publishRound_; }
    const std::vector<Bytes>& publishedBidSet() const { return publishedBidSet_; }

private:
    std::vector<Bytes> collectBids(const ReadResult& view) const;

    PodClient* client_;
    BidsetConfig config_;
    Bytes sk_;
    SequencerBehavior behavior_;
    Bytes censorTarget_;  // raw bid bytes, without ssid prefix
    bool published_ = false;
    std::optional<Round> publishRound_;
    std::vector<Bytes> publishedBidSet_;
};

struct ConsumerResult {
    std::vector<Bytes> bidSet;           // empty on the fallback path
    std::map<ReplicaId, Vote> evidence;  // cBid of the chosen BIDS, or cPp on fallback
    Round emittedAt = 0;
    bool fromBidsTx = false;
};

class Consumer {
public:
    Consumer(PodClient& client, BidsetConfig config) : client_(&client), config_(std::move(config)) {}

    // Drive once per round after deliveries; emits exactly one result.
    void pollRound(Round round);

    const std::optional<ConsumerResult>& result() const { return result_; }
    // Distinct qualifying BIDS transactions beyond the chosen one; a nonempty
    // list is sequencer-equivocation evidence.
    const std::vector<BidsMessage>& equivocations() const { return equivocations_; }

private:
    PodClient* client_;
    BidsetConfig config_;
    std::optional<ConsumerResult> result_;
    std::vector<BidsMessage> equivocations_;
};

// Open-auction winner helpers over a result's bid set: bids parse as ASCII
// unsigned integers once the ssid prefix is stripped; anything else is
// ignored.
std::optional<std::uint64_t> firstPrice(const Bytes& ssid, const std::vector<Bytes>& bidSet);
std::optional<std::uint64_t> secondPrice(const Bytes& ssid, const std::vector<Bytes>& bidSet);

}  // namespace pod::bidset
