#include "pod/types.hpp"

#include <string>

namespace pod {

std::string roundToString(const MaxRound& r) {
    return r.isInfinite() ? "inf" : std::to_string(r.value());
}

FaultProfile checkProfile(std::uint32_t n, std::uint32_t beta, std::uint32_t gamma) {
    const std::uint64_t required = 5ull * beta + 3ull * gamma + 1ull;
    if (n < required) {
        throw ConfigError("fault profile violates n >= 5*beta + 3*gamma + 1: n=" + std::to_string(n) +
                          " beta=" + std::to_string(beta) + " gamma=" + std::to_string(gamma) +
                          " requires n >= " + std::to_string(required));
    }
    FaultProfile p;
    p.n = n;
    p.beta = beta;
    p.gamma = gamma;
    p.alpha = n - beta - gamma;
    return p;
}

Bytes encodeVoteWire(const Vote& v) {
    Bytes out;
    putU32(out, v.replica);
    putU64(out, v.ts);
    putU64(out, v.sn);
    putLenPrefixed(out, v.tx);
    putLenPrefixed(out, v.sigma);
    return out;
}

std::optional<Vote> decodeVoteWire(std::string_view payload) {
    try {
        ByteReader r(payload);
        Vote v;
        v.replica = r.u32();
        v.ts = r.u64();
        v.sn = r.u64();
        v.tx = r.lenPrefixed();
        v.sigma = r.lenPrefixed();
        if (!r.atEnd()) return std::nullopt;
        return v;
    } catch (const CodecError&) {
        return std::nullopt;
    }
}

Bytes heartbeatTx(Round round) {
    Bytes tx = "HB";
    putU64(tx, round);
    return tx;
}

bool isHeartbeatTx(std::string_view tx) {
    return tx.size() == 10 && tx[0] == 'H' && tx[1] == 'B';
}

}  // namespace pod
