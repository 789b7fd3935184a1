#pragma once

#include <set>
#include <vector>

#include "pod/registry.hpp"
#include "pod/types.hpp"

namespace pod {

// A partial transcript: any multiset of vote messages from an execution.
// Adversarial input is legal, including votes with garbage signatures.
struct Transcript {
    std::vector<Vote> votes;

    void add(const Vote& v) { votes.push_back(v); }
    void addAll(const Certificates& certs);
};

// Every replica with two validly signed votes that share a sequence number
// but differ in transaction or timestamp. Grouping by (replica, sn) replaces
// the quadratic pairwise scan; the predicate over pairs is the same.
// Monotone: adding votes never removes a replica from the output.
std::set<ReplicaId> identify(const Registry& registry, const Transcript& transcript);

// Evidence against a bidset sequencer: the certificate for the allegedly
// censored transaction, the published bid set, the sequencer's past-perfect
// certificate and its signature over (B, cBid).
struct SequencerEvidence {
    TxCertificate cTx;
    std::vector<Bytes> bidSet;  // B, sorted lexicographically
    std::map<ReplicaId, Vote> cBid;
    Bytes sigma;
};

// Malformed accusations are a third outcome so callers cannot mistake them
// for exoneration.
enum class SequencerVerdict {
    Misbehaved,
    NotMisbehaved,
    NotValidEvidence,
};

const char* sequencerVerdictName(SequencerVerdict v);

SequencerVerdict identifySequencer(const Registry& registry, const Bytes& sequencerPk,
                                   const Bytes& ssid, const SequencerEvidence& evidence, Round t0,
                                   Round Delta);

}  // namespace pod
