#include "pod/bidset.hpp"

#include <algorithm>

#include "pod/codec.hpp"

namespace pod::bidset {

namespace {
constexpr std::uint8_t kBidsTag = 0xB5;

void putVoteMap(Bytes& out, const std::map<ReplicaId, Vote>& votes) {
    putU32(out, static_cast<std::uint32_t>(votes.size()));
    for (const auto& [replica, vote] : votes) putLenPrefixed(out, encodeVoteWire(vote));
}

std::optional<std::map<ReplicaId, Vote>> readVoteMap(ByteReader& r) {
    std::uint32_t count = r.u32();
    std::map<ReplicaId, Vote> votes;
    for (std::uint32_t i = 0; i < count; ++i) {
        auto vote = decodeVoteWire(r.lenPrefixed());
        if (!vote) return std::nullopt;
        votes[vote->replica] = *vote;
    }
    return votes;
}
}  // namespace

Bytes bidTx(const Bytes& ssid, const Bytes& bid) { return ssid + bid; }

Bytes bidsSignPayload(const Bytes& ssid, const std::vector<Bytes>& bidSet,
                      const std::map<ReplicaId, Vote>& cBid) {
    Bytes out;
    putLenPrefixed(out, ssid);
    putU32(out, static_cast<std::uint32_t>(bidSet.size()));
    for (const Bytes& bid : bidSet) putLenPrefixed(out, bid);
    putVoteMap(out, cBid);
    return out;
}

Bytes encodeBidsTx(const Bytes& ssid, const BidsMessage& msg) {
    Bytes out = ssid;
    putU8(out, kBidsTag);
    putU32(out, static_cast<std::uint32_t>(msg.bidSet.size()));
    for (const Bytes& bid : msg.bidSet) putLenPrefixed(out, bid);
    putVoteMap(out, msg.cBid);
    putLenPrefixed(out, msg.sigma);
    return out;
}

std::optional<BidsMessage> tryParseBidsTx(const Bytes& ssid, const Bytes& tx) {
    if (tx.size() <= ssid.size() + 1 || tx.compare(0, ssid.size(), ssid) != 0) return std::nullopt;
    if (static_cast<std::uint8_t>(tx[ssid.size()]) != kBidsTag) return std::nullopt;
    try {
        ByteReader r(std::string_view(tx).substr(ssid.size() + 1));
        BidsMessage msg;
        std::uint32_t count = r.u32();
        for (std::uint32_t i = 0; i < count; ++i) msg.bidSet.push_back(r.lenPrefixed());
        auto votes = readVoteMap(r);
        if (!votes) return std::nullopt;
        msg.cBid = std::move(*votes);
        msg.sigma = r.lenPrefixed();
        if (!r.atEnd()) return std::nullopt;
        if (!std::is_sorted(msg.bidSet.begin(), msg.bidSet.end())) return std::nullopt;
        return msg;
    } catch (const CodecError&) {
        return std::nullopt;
    }
}

Sequencer::Sequencer(PodClient& client, BidsetConfig config, Bytes secretKey,
                     SequencerBehavior behavior, Bytes censorTarget)
    : client_(&client),
      config_(std::move(config)),
      sk_(std::move(secretKey)),
      behavior_(behavior),
      censorTarget_(std::move(censorTarget)) {}

std::vector<Bytes> Sequencer::collectBids(const ReadResult& view) const {
    std::vector<Bytes> bids;
    for (const auto& [tx, trace] : view.data.traces) {
        if (tx.size() < config_.ssid.size() ||
            tx.compare(0, config_.ssid.size(), config_.ssid) != 0) {
            continue;  // foreign session
        }
        if (tryParseBidsTx(config_.ssid, tx)) continue;  // a published bid set is not a bid
        bids.push_back(tx);
    }
    std::sort(bids.begin(), bids.end());
    return bids;
}

void Sequencer::pollRound(Round round) {
    if (published_ || behavior_ == SequencerBehavior::Silent || round < config_.t0) return;
    ReadResult view = client_->read();
    // Wait until every bid that can confirm by t0+Delta is provably present.
    if (view.data.rPerf < config_.t0 + config_.Delta) return;

    std::vector<Bytes> bids = collectBids(view);
    if (behavior_ == SequencerBehavior::Censor) {
        Bytes target = bidTx(config_.ssid, censorTarget_);
        bids.erase(std::remove(bids.begin(), bids.end(), target), bids.end());
    }

    const auto& scheme = client_->ledger().registry().sigScheme();
    auto publish = [&](const std::vector<Bytes>& bidSet) {
        BidsMessage msg;
        msg.bidSet = bidSet;
        msg.cBid = view.certs.cPp;
        msg.sigma = scheme.sign(sk_, bidsSignPayload(config_.ssid, msg.bidSet, msg.cBid));
        client_->write(encodeBidsTx(config_.ssid, msg));
    };

    publish(bids);
    if (behavior_ == SequencerBehavior::Equivocate) {
        std::vector<Bytes> alternate = bids;
        if (!alternate.empty()) alternate.pop_back();
        publish(alternate);
    }

    published_ = true;
    publishRound_ = round;
    publishedBidSet_ = std::move(bids);
}

void Consumer::pollRound(Round round) {
    if (result_ || round < config_.t0) return;
    ReadResult view = client_->read();
    const auto& registry = client_->ledger().registry();

    // Qualifying BIDS transactions: confirmed by t0+3Delta, well-formed and
    // carrying a valid sequencer signature. Invalidly signed ones are absent.
    struct Candidate {
        Round rConf;
        Bytes tx;
        BidsMessage msg;
    };
    std::vector<Candidate> candidates;
    for (const auto& [tx, trace] : view.data.traces) {
        if (!trace.rConf || *trace.rConf > config_.t0 + 3 * config_.Delta) continue;
        auto msg = tryParseBidsTx(config_.ssid, tx);
        if (!msg) continue;
        if (!registry.sigScheme().verify(config_.sequencerPk,
                                         bidsSignPayload(config_.ssid, msg->bidSet, msg->cBid),
                                         msg->sigma)) {
            continue;
        }
        candidates.push_back({*trace.rConf, tx, std::move(*msg)});
    }

    if (!candidates.empty()) {
        // Deterministic pick under sequencer equivocation: smallest confirmed
        // round, ties by lexicographically smallest tx bytes.
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            return a.rConf != b.rConf ? a.rConf < b.rConf : a.tx < b.tx;
        });
        for (std::size_t i = 1; i < candidates.size(); ++i) {
            equivocations_.push_back(candidates[i].msg);
        }
        ConsumerResult res;
        res.bidSet = candidates.front().msg.bidSet;
        res.evidence = candidates.front().msg.cBid;
        res.emittedAt = round;
        res.fromBidsTx = true;
        result_ = std::move(res);
        return;
    }

    if (view.data.rPerf >= config_.t0 + 3 * config_.Delta) {
        ConsumerResult res;
        res.evidence = view.certs.cPp;
        res.emittedAt = round;
        res.fromBidsTx = false;
        result_ = std::move(res);
    }
}

namespace {
std::optional<std::uint64_t> parseBidValue(const Bytes& ssid, const Bytes& bidTxBytes) {
    if (bidTxBytes.size() <= ssid.size()) return std::nullopt;
    std::string_view digits = std::string_view(bidTxBytes).substr(ssid.size());
    std::uint64_t value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return value;
}
}  // namespace

std::optional<std::uint64_t> firstPrice(const Bytes& ssid, const std::vector<Bytes>& bidSet) {
    std::optional<std::uint64_t> best;
    for (const Bytes& bid : bidSet) {
        auto v = parseBidValue(ssid, bid);
        if (v && (!best || *v > *best)) best = v;
    }
    return best;
}

std::optional<std::uint64_t> secondPrice(const Bytes& ssid, const std::vector<Bytes>& bidSet) {
    std::optional<std::uint64_t> best, second;
    for (const Bytes& bid : bidSet) {
        auto v = parseBidValue(ssid, bid);
        if (!v) continue;
        if (!best || *v > *best) {
            second = best;
            best = v;
        } else if (!second || *v > *second) {
            second = v;
        }
    }
    return second;
}

}  // namespace pod::bidset
