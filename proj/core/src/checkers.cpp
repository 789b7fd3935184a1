#include "pod/checkers.hpp"

#include <algorithm>
#include <map>

#include "pod/validator.hpp"

namespace pod::sim {

namespace {

void fail(std::vector<CheckFailure>& out, const Simulation& sim, std::string property,
          std::string detail) {
    detail += " seed=" + std::to_string(sim.config().seed);
    out.push_back({std::move(property), std::move(detail)});
}

// First write round per transaction; replicas dedupe later writes.
std::map<Bytes, Round> firstWrites(const Simulation& sim) {
    std::map<Bytes, Round> writes;
    for (const auto& [tx, round] : sim.honestWrites()) {
        auto it = writes.find(tx);
        if (it == writes.end() || round < it->second) writes[tx] = round;
    }
    return writes;
}

Round clientCheckStart(const Simulation& sim, std::uint32_t client) {
    const SimConfig& cfg = sim.config();
    if (cfg.preConnected) return 0;
    Round connectRound = 0;
    for (const Action& a : cfg.actions) {
        if (a.kind == Action::Kind::Connect && a.client == client) {
            connectRound = a.round;
            break;
        }
    }
    // A joining client needs the connect round trip before its stream is live.
    return connectRound + 2 * cfg.maxDelay();
}

}  // namespace

void checkConfirmationWithin2Delta(const Simulation& sim, std::vector<CheckFailure>& out) {
    const Round delta = sim.config().maxDelay();
    const auto writes = firstWrites(sim);
    for (const Snapshot& snap : sim.snapshots()) {
        if (snap.round < clientCheckStart(sim, snap.client)) continue;
        for (const auto& [tx, writeRound] : writes) {
            if (snap.round < writeRound + 2 * delta) continue;
            auto it = snap.view.data.traces.find(tx);
            if (it == snap.view.data.traces.end() || !it->second.rConf) {
                fail(out, sim, "confirmation_within_2delta",
                     "tx=" + previewBytes(tx) + " written r=" + std::to_string(writeRound) +
                         " unconfirmed in C" + std::to_string(snap.client) + " read at r=" +
                         std::to_string(snap.round));
            }
        }
    }
}

void checkPastPerfectionWithinDelta(const Simulation& sim, std::vector<CheckFailure>& out) {
    const Round delta = sim.config().maxDelay();
    for (const Snapshot& snap : sim.snapshots()) {
        Round start = std::max<Round>(delta, clientCheckStart(sim, snap.client));
        if (snap.round < start) continue;
        if (snap.view.data.rPerf + delta < snap.round) {
            fail(out, sim, "past_perfection_within_delta",
                 "C" + std::to_string(snap.client) + " at r=" + std::to_string(snap.round) +
                     " rPerf=" + std::to_string(snap.view.data.rPerf));
        }
    }
}

void checkPairwiseSafety(const Simulation& sim, std::vector<CheckFailure>& out) {
    const auto& snaps = sim.snapshots();

    // Per-trace invariant: rMin <= rConf <= rMax whenever confirmed.
    for (const Snapshot& snap : snaps) {
        for (const auto& [tx, trace] : snap.view.data.traces) {
            if (!trace.rConf) continue;
            if (*trace.rConf < trace.rMin || MaxRound(*trace.rConf) > trace.rMax) {
                fail(out, sim, "trace_invariant",
                     "tx=" + previewBytes(tx) + " rMin=" + std::to_string(trace.rMin) + " rConf=" +
                         std::to_string(*trace.rConf) + " rMax=" + roundToString(trace.rMax));
                return;
            }
        }
    }

    // Collect per-transaction occurrences across every honest view.
    struct Occurrence {
        std::size_t snapIdx;
        const TransactionTrace* trace;
    };
    std::map<Bytes, std::vector<Occurrence>> byTx;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        for (const auto& [tx, trace] : snaps[i].view.data.traces) byTx[tx].push_back({i, &trace});
    }

    for (const auto& [tx, occurrences] : byTx) {
        // Confirmation bounds over every pair of views of tx.
        Round maxRMin = 0;
        MaxRound minRMax = MaxRound::infinity();
        std::optional<Round> minConf, maxConf;
        for (const Occurrence& occ : occurrences) {
            maxRMin = std::max(maxRMin, occ.trace->rMin);
            minRMax = std::min(minRMax, occ.trace->rMax);
            if (occ.trace->rConf) {
                if (!minConf || *occ.trace->rConf < *minConf) minConf = occ.trace->rConf;
                if (!maxConf || *occ.trace->rConf > *maxConf) maxConf = occ.trace->rConf;
            }
        }
        if (minConf && (maxRMin > *minConf || minRMax < MaxRound(*maxConf))) {
            fail(out, sim, "confirmation_bounds",
                 "tx=" + previewBytes(tx) + " max(rMin)=" + std::to_string(maxRMin) +
                     " min(rMax)=" + roundToString(minRMax) + " rConf range=[" + std::to_string(*minConf) +
                     "," + std::to_string(*maxConf) + "]");
        }
        if (!minConf) continue;
        // Past-perfection: no view may have rPerf beyond a confirmed round of
        // a transaction it does not contain.
        std::vector<bool> contains(snaps.size(), false);
        for (const Occurrence& occ : occurrences) contains[occ.snapIdx] = true;
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            if (contains[i]) continue;
            if (snaps[i].view.data.rPerf > *minConf) {
                fail(out, sim, "past_perfection_safety",
                     "tx=" + previewBytes(tx) + " confirmed at " + std::to_string(*minConf) +
                         " missing from C" + std::to_string(snaps[i].client) + "@r" +
                         std::to_string(snaps[i].round) + " with rPerf=" +
                         std::to_string(snaps[i].view.data.rPerf));
                break;
            }
        }
    }
}

void checkTimeliness(const Simulation& sim, std::vector<CheckFailure>& out) {
    const Round delta = sim.config().maxDelay();
    const auto writes = firstWrites(sim);
    for (const Snapshot& snap : sim.snapshots()) {
        for (const auto& [tx, writeRound] : writes) {
            auto it = snap.view.data.traces.find(tx);
            if (it == snap.view.data.traces.end()) continue;
            const TransactionTrace& trace = it->second;
            const bool confOk = trace.rConf && *trace.rConf > writeRound &&
                                *trace.rConf <= writeRound + delta;
            const bool maxOk = !trace.rMax.isInfinite() && trace.rMax.value() > writeRound &&
                               trace.rMax.value() <= writeRound + delta;
            const bool widthOk = maxOk && trace.rMax.value() - trace.rMin < delta;
            if (!confOk || !maxOk || !widthOk) {
                fail(out, sim, "theta_timeliness",
                     "tx=" + previewBytes(tx) + " written r=" + std::to_string(writeRound) +
                         " C" + std::to_string(snap.client) + "@r" + std::to_string(snap.round) +
                         " rMin=" + std::to_string(trace.rMin) + " rMax=" + roundToString(trace.rMax) +
                         " rConf=" + (trace.rConf ? std::to_string(*trace.rConf) : "bot"));
                return;
            }
        }
    }
}

void checkMonotonicity(const Simulation& sim, std::vector<CheckFailure>& out) {
    std::map<std::uint32_t, const Snapshot*> previous;
    for (const Snapshot& snap : sim.snapshots()) {
        const Snapshot* prev = previous[snap.client];
        previous[snap.client] = &snap;
        if (!prev) continue;
        if (snap.view.data.rPerf < prev->view.data.rPerf) {
            fail(out, sim, "monotonicity",
                 "rPerf receded for C" + std::to_string(snap.client) + " at r=" +
                     std::to_string(snap.round));
            return;
        }
        for (const auto& [tx, oldTrace] : prev->view.data.traces) {
            auto it = snap.view.data.traces.find(tx);
            if (it == snap.view.data.traces.end()) {
                fail(out, sim, "monotonicity", "tx disappeared: " + previewBytes(tx));
                return;
            }
            const TransactionTrace& cur = it->second;
            if (cur.rMin < oldTrace.rMin || cur.rMax > oldTrace.rMax ||
                (oldTrace.rConf && !cur.rConf)) {
                fail(out, sim, "monotonicity",
                     "trace loosened for tx=" + previewBytes(tx) + " at C" +
                         std::to_string(snap.client) + "@r" + std::to_string(snap.round));
                return;
            }
        }
    }
}

void checkReplicaLogs(const Simulation& sim, std::vector<CheckFailure>& out) {
    for (std::uint32_t r = 0; r < sim.config().profile.n; ++r) {
        const Replica* replica = sim.honestReplicaCore(r);
        if (!replica) continue;
        Round lastTs = 0;
        std::set<Bytes> seen;
        for (std::size_t i = 0; i < replica->log().size(); ++i) {
            const Vote& vote = replica->log()[i];
            if (vote.sn != i) {
                fail(out, sim, "replica_log", "sn gap at R" + std::to_string(r));
                return;
            }
            if (vote.ts < lastTs) {
                fail(out, sim, "replica_log", "ts decreased at R" + std::to_string(r));
                return;
            }
            lastTs = vote.ts;
            if (!seen.insert(vote.tx).second) {
                fail(out, sim, "replica_log", "duplicate tx at R" + std::to_string(r));
                return;
            }
        }
    }
}

void checkNoFraming(const Simulation& sim, std::vector<CheckFailure>& out) {
    const auto identified = identify(sim.registry(), sim.extractTranscript());
    const auto byzantine = sim.byzantineReplicas();
    for (ReplicaId r : identified) {
        if (!byzantine.count(r)) {
            fail(out, sim, "no_framing", "identify named non-Byzantine replica R" + std::to_string(r));
        }
    }
    // With clients in both groups, an equivocator's two chains are both on the
    // wire, so the union transcript must expose it.
    if (sim.config().numClients >= 2) {
        for (const auto& [id, spec] : sim.config().adversaries) {
            if (spec.kind == AdversaryKind::EquivocateSn && !identified.count(id)) {
                fail(out, sim, "no_framing",
                     "equivocating replica R" + std::to_string(id) + " not identified");
            }
        }
    }
}

void checkValidatorSoundness(const Simulation& sim, std::size_t sampleEvery,
                             std::vector<CheckFailure>& out) {
    if (sampleEvery == 0) return;
    const auto& snaps = sim.snapshots();
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const bool lastForClient =
            i + sim.config().numClients >= snaps.size();  // final round's reads
        if (i % sampleEvery != 0 && !lastForClient) continue;
        auto result = validPod(sim.registry(), snaps[i].view.data, snaps[i].view.certs);
        if (!result.ok) {
            fail(out, sim, "validator_completeness",
                 std::string("honest read failed valid(): ") + validationReasonName(result.reason) + " C" +
                     std::to_string(snaps[i].client) + "@r" + std::to_string(snaps[i].round));
            return;
        }
    }
}

std::vector<CheckFailure> checkAll(const Simulation& sim, const CheckOptions& options) {
    std::vector<CheckFailure> out;
    if (options.confirmationWithin2Delta) checkConfirmationWithin2Delta(sim, out);
    if (options.pastPerfectionWithinDelta) checkPastPerfectionWithinDelta(sim, out);
    if (options.pairwiseSafety) checkPairwiseSafety(sim, out);
    if (options.timeliness) checkTimeliness(sim, out);
    if (options.monotonicity) checkMonotonicity(sim, out);
    if (options.replicaLogs) checkReplicaLogs(sim, out);
    if (options.noFraming) checkNoFraming(sim, out);
    checkValidatorSoundness(sim, options.validatorSampleEvery, out);
    return out;
}

}  // namespace pod::sim
