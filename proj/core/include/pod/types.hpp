#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pod/bytes.hpp"
#include "pod/codec.hpp"

namespace pod {

using Round = std::uint64_t;
using SeqNum = std::uint64_t;
using ReplicaId = std::uint32_t;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

// A round that may be unbounded. Infinity compares greater than every finite
// round, which is what the trace computations sort and index on.
class MaxRound {
public:
    constexpr MaxRound() : finite_(false), value_(0) {}
    constexpr explicit MaxRound(Round r) : finite_(true), value_(r) {}

    static constexpr MaxRound infinity() { return MaxRound(); }

    constexpr bool isInfinite() const { return !finite_; }
    constexpr Round value() const {
        return finite_ ? value_ : throw PreconditionError("MaxRound: value() on infinity");
    }

    friend constexpr bool operator==(const MaxRound& a, const MaxRound& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }
    friend constexpr bool operator<(const MaxRound& a, const MaxRound& b) {
        if (a.finite_ && b.finite_) return a.value_ < b.value_;
        return a.finite_ && !b.finite_;
    }
    friend constexpr bool operator<=(const MaxRound& a, const MaxRound& b) { return a == b || a < b; }
    friend constexpr bool operator>(const MaxRound& a, const MaxRound& b) { return b < a; }
    friend constexpr bool operator>=(const MaxRound& a, const MaxRound& b) { return b <= a; }

private:
    bool finite_;
    Round value_;
};

std::string roundToString(const MaxRound& r);

// Replica budget (n, beta, gamma) with the derived confirmation quorum alpha.
// Construction enforces the resilience bound n >= 5*beta + 3*gamma + 1.
struct FaultProfile {
    std::uint32_t n = 0;
    std::uint32_t beta = 0;
    std::uint32_t gamma = 0;
    std::uint32_t alpha = 0;

    bool operator==(const FaultProfile&) const = default;
};

FaultProfile checkProfile(std::uint32_t n, std::uint32_t beta, std::uint32_t gamma);

// Median per the protocol: element at index floor(len/2) of an ascending list.
// The caller provides the list already sorted; infinity sorts last.
template <typename T>
const T& medianOf(const std::vector<T>& sortedAscending) {
    if (sortedAscending.empty()) throw PreconditionError("medianOf: empty list");
    return sortedAscending[sortedAscending.size() / 2];
}

struct Vote {
    Bytes tx;
    Round ts = 0;
    SeqNum sn = 0;
    Bytes sigma;
    ReplicaId replica = 0;

    bool operator==(const Vote&) const = default;
};

// VOTE frame payload: replica:u32 | ts:u64 | sn:u64 | len4(tx) | len4(sigma)
Bytes encodeVoteWire(const Vote& v);
std::optional<Vote> decodeVoteWire(std::string_view payload);

struct TransactionTrace {
    Bytes tx;
    Round rMin = 0;
    MaxRound rMax;
    std::optional<Round> rConf;

    bool operator==(const TransactionTrace&) const = default;
};

struct PodData {
    // Keyed by exact tx bytes; at most one trace per tx.
    std::map<Bytes, TransactionTrace> traces;
    Round rPerf = 0;
    // The producing client's heartbeat-filter setting. The validator must
    // recompute the trace set under the same convention, so it travels with
    // the data.
    bool heartbeatsFiltered = true;

    bool operator==(const PodData&) const = default;
};

using TxCertificate = std::map<ReplicaId, Vote>;

struct Certificates {
    std::map<ReplicaId, Vote> cPp;          // per replica, the latest accepted vote
    std::map<Bytes, TxCertificate> cTxAll;  // per tx, all accepted votes

    bool operator==(const Certificates&) const = default;
};

struct ReadResult {
    PodData data;
    Certificates certs;
};

// Heartbeat transactions: fixed ASCII prefix "HB" plus the 8-byte big-endian
// round, so the dummy per-round votes are distinct across rounds and clients
// can filter them out of read() output.
Bytes heartbeatTx(Round round);
bool isHeartbeatTx(std::string_view tx);

}  // namespace pod
