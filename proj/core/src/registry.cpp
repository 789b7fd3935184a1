#include "pod/registry.hpp"

namespace pod {

KeyRing makeKeyRing(const FaultProfile& profile, SchemeId schemeId, const Bytes& sid,
                    std::uint64_t keySeed) {
    KeyRing ring;
    ring.registry.profile = profile;
    ring.registry.schemeId = schemeId;
    ring.registry.sid = sid;
    const SignatureScheme& s = scheme(schemeId);
    ring.replicaKeys.reserve(profile.n);
    ring.registry.replicaPks.reserve(profile.n);
    for (std::uint32_t i = 0; i < profile.n; ++i) {
        KeyPair kp = s.keygen(keySeed * 1000003ull + i);
        ring.registry.replicaPks.push_back(kp.pk);
        ring.replicaKeys.push_back(std::move(kp));
    }
    return ring;
}

}  // namespace pod
