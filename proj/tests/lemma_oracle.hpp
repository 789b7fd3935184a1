#pragma once

// Closed-form index oracles for the trace statistics, kept independent of the
// production list-building path so the two routes can be checked against each
// other.

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "pod/stats.hpp"

namespace podtest {

using pod::FaultProfile;
using pod::MaxRound;
using pod::ReplicaId;
using pod::Round;

inline Round oracleMinPossibleTs(const std::map<ReplicaId, Round>& txTs,
                                 const std::vector<Round>& mrt, const FaultProfile& p) {
    std::vector<Round> filled;
    for (ReplicaId r = 0; r < p.n; ++r) {
        auto it = txTs.find(r);
        filled.push_back(it != txTs.end() ? it->second : mrt[r]);
    }
    std::sort(filled.begin(), filled.end());
    const std::uint32_t half = p.alpha / 2;
    if (half < p.beta) return 0;  // index falls into the prepended zeros
    return filled[half - p.beta];
}

inline MaxRound oracleMaxPossibleTs(const std::map<ReplicaId, Round>& txTs, const FaultProfile& p) {
    std::vector<MaxRound> filled;
    for (ReplicaId r = 0; r < p.n; ++r) {
        auto it = txTs.find(r);
        filled.push_back(it != txTs.end() ? MaxRound(it->second) : MaxRound::infinity());
    }
    std::sort(filled.begin(), filled.end());
    const std::size_t idx = p.n - p.alpha + p.alpha / 2 + p.beta;
    if (idx >= filled.size()) return MaxRound::infinity();  // appended infinities
    return filled[idx];
}

inline Round oraclePastPerfect(const std::vector<Round>& mrt, const FaultProfile& p) {
    std::vector<Round> sorted = mrt;
    std::sort(sorted.begin(), sorted.end());
    const std::uint32_t half = p.alpha / 2;
    if (half < p.beta) return 0;
    return sorted[half - p.beta];
}

struct RandomInstance {
    std::map<ReplicaId, Round> txTs;
    std::vector<Round> mrt;
};

// Instances shaped like reachable client state: an accepted timestamp never
// exceeds the replica's most recent timestamp.
inline RandomInstance randomInstance(std::mt19937_64& rng, const FaultProfile& p) {
    RandomInstance inst;
    inst.mrt.resize(p.n);
    for (ReplicaId r = 0; r < p.n; ++r) {
        if (rng() % 3 != 0) {  // voter
            Round ts = rng() % 50;
            inst.txTs[r] = ts;
            inst.mrt[r] = ts + rng() % 20;
        } else {
            inst.mrt[r] = rng() % 60;
        }
    }
    return inst;
}

}  // namespace podtest
