#include "pod/serial.hpp"

#include <fstream>

#include "pod/codec.hpp"

namespace pod {

namespace {

constexpr char kPodMagic[] = "POD1";
constexpr char kTranscriptMagic[] = "TRN1";
constexpr char kEvidenceMagic[] = "EVD1";
constexpr std::uint8_t kFormatVersion = 1;

void putMagic(Bytes& out, const char* magic) { out.append(magic, 4); }

void expectMagic(ByteReader& r, const char* magic) {
    for (int i = 0; i < 4; ++i) {
        if (r.u8() != static_cast<std::uint8_t>(magic[i])) throw CodecError("bad file magic");
    }
    if (r.u8() != kFormatVersion) throw CodecError("unsupported file version");
}

void putRegistry(Bytes& out, const Registry& reg) {
    putU8(out, static_cast<std::uint8_t>(reg.schemeId));
    putU32(out, reg.profile.n);
    putU32(out, reg.profile.beta);
    putU32(out, reg.profile.gamma);
    putLenPrefixed(out, reg.sid);
    putU32(out, static_cast<std::uint32_t>(reg.replicaPks.size()));
    for (const Bytes& pk : reg.replicaPks) putLenPrefixed(out, pk);
}

Registry readRegistry(ByteReader& r) {
    Registry reg;
    reg.schemeId = static_cast<SchemeId>(r.u8());
    if (reg.schemeId != SchemeId::HmacTest && reg.schemeId != SchemeId::Ed25519) {
        throw CodecError("unknown scheme id");
    }
    std::uint32_t n = r.u32();
    std::uint32_t beta = r.u32();
    std::uint32_t gamma = r.u32();
    reg.profile = checkProfile(n, beta, gamma);
    reg.sid = r.lenPrefixed();
    std::uint32_t pkCount = r.u32();
    if (pkCount != n) throw CodecError("registry pk count != n");
    reg.replicaPks.reserve(pkCount);
    for (std::uint32_t i = 0; i < pkCount; ++i) reg.replicaPks.push_back(r.lenPrefixed());
    return reg;
}

void putVote(Bytes& out, const Vote& vote) { putLenPrefixed(out, encodeVoteWire(vote)); }

Vote readVote(ByteReader& r) {
    auto vote = decodeVoteWire(r.lenPrefixed());
    if (!vote) throw CodecError("bad vote encoding");
    return *vote;
}

void putVoteMap(Bytes& out, const std::map<ReplicaId, Vote>& votes) {
    putU32(out, static_cast<std::uint32_t>(votes.size()));
    for (const auto& [replica, vote] : votes) putVote(out, vote);
}

std::map<ReplicaId, Vote> readVoteMap(ByteReader& r) {
    std::map<ReplicaId, Vote> votes;
    std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        Vote v = readVote(r);
        votes[v.replica] = v;
    }
    return votes;
}

}  // namespace

Bytes encodePodFile(const PodFile& file) {
    Bytes out;
    putMagic(out, kPodMagic);
    putU8(out, kFormatVersion);
    putRegistry(out, file.registry);
    putU8(out, file.data.heartbeatsFiltered ? 1 : 0);
    putU64(out, file.data.rPerf);
    putU32(out, static_cast<std::uint32_t>(file.data.traces.size()));
    for (const auto& [tx, trace] : file.data.traces) {
        putLenPrefixed(out, trace.tx);
        putU64(out, trace.rMin);
        putU8(out, trace.rMax.isInfinite() ? 1 : 0);
        putU64(out, trace.rMax.isInfinite() ? 0 : trace.rMax.value());
        putU8(out, trace.rConf ? 1 : 0);
        putU64(out, trace.rConf ? *trace.rConf : 0);
    }
    putVoteMap(out, file.certs.cPp);
    putU32(out, static_cast<std::uint32_t>(file.certs.cTxAll.size()));
    for (const auto& [tx, txCert] : file.certs.cTxAll) {
        putLenPrefixed(out, tx);
        putVoteMap(out, txCert);
    }
    return out;
}

PodFile decodePodFile(std::string_view data) {
    ByteReader r(data);
    expectMagic(r, kPodMagic);
    PodFile file;
    file.registry = readRegistry(r);
    file.data.heartbeatsFiltered = r.u8() != 0;
    file.data.rPerf = r.u64();
    std::uint32_t traceCount = r.u32();
    for (std::uint32_t i = 0; i < traceCount; ++i) {
        TransactionTrace trace;
        trace.tx = r.lenPrefixed();
        trace.rMin = r.u64();
        bool inf = r.u8() != 0;
        Round maxValue = r.u64();
        trace.rMax = inf ? MaxRound::infinity() : MaxRound(maxValue);
        bool confirmed = r.u8() != 0;
        Round confValue = r.u64();
        if (confirmed) trace.rConf = confValue;
        file.data.traces.emplace(trace.tx, std::move(trace));
    }
    file.certs.cPp = readVoteMap(r);
    std::uint32_t txCount = r.u32();
    for (std::uint32_t i = 0; i < txCount; ++i) {
        Bytes tx = r.lenPrefixed();
        file.certs.cTxAll[tx] = readVoteMap(r);
    }
    if (!r.atEnd()) throw CodecError("trailing bytes in pod file");
    return file;
}

Bytes encodeTranscriptFile(const TranscriptFile& file) {
    Bytes out;
    putMagic(out, kTranscriptMagic);
    putU8(out, kFormatVersion);
    putRegistry(out, file.registry);
    putU32(out, static_cast<std::uint32_t>(file.transcript.votes.size()));
    for (const Vote& vote : file.transcript.votes) putVote(out, vote);
    return out;
}

TranscriptFile decodeTranscriptFile(std::string_view data) {
    ByteReader r(data);
    expectMagic(r, kTranscriptMagic);
    TranscriptFile file;
    file.registry = readRegistry(r);
    std::uint32_t count = r.u32();
    file.transcript.votes.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) file.transcript.votes.push_back(readVote(r));
    if (!r.atEnd()) throw CodecError("trailing bytes in transcript file");
    return file;
}

Bytes encodeEvidenceFile(const EvidenceFile& file) {
    Bytes out;
    putMagic(out, kEvidenceMagic);
    putU8(out, kFormatVersion);
    putRegistry(out, file.registry);
    putLenPrefixed(out, file.sequencerPk);
    putLenPrefixed(out, file.ssid);
    putU32(out, static_cast<std::uint32_t>(file.evidence.bidSet.size()));
    for (const Bytes& bid : file.evidence.bidSet) putLenPrefixed(out, bid);
    putVoteMap(out, file.evidence.cBid);
    putVoteMap(out, file.evidence.cTx);
    putLenPrefixed(out, file.evidence.sigma);
    return out;
}

EvidenceFile decodeEvidenceFile(std::string_view data) {
    ByteReader r(data);
    expectMagic(r, kEvidenceMagic);
    EvidenceFile file;
    file.registry = readRegistry(r);
    file.sequencerPk = r.lenPrefixed();
    file.ssid = r.lenPrefixed();
    std::uint32_t bidCount = r.u32();
    for (std::uint32_t i = 0; i < bidCount; ++i) file.evidence.bidSet.push_back(r.lenPrefixed());
    file.evidence.cBid = readVoteMap(r);
    file.evidence.cTx = readVoteMap(r);
    file.evidence.sigma = r.lenPrefixed();
    if (!r.atEnd()) throw CodecError("trailing bytes in evidence file");
    return file;
}

void writeFile(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Bytes readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace pod
