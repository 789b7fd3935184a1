#pragma once

#include "pod/client.hpp"
#include "pod/registry.hpp"
#include "pod/types.hpp"

namespace pod {

// Why a pod data structure failed validation. Diagnostic only: the boolean
// contract of valid() is just ok/not-ok.
enum class ValidationReason {
    OK,
    BAD_SIG,
    SN_GAP,
    STALE_TS,
    DUP_TS_CONFLICT,
    TRACESET_MISMATCH,
    RPERF_MISMATCH,
    CPP_NOT_IN_CTX,
    CPP_NOT_MAX_SN,
};

const char* validationReasonName(ValidationReason r);

struct ValidationResult {
    bool ok = false;
    ValidationReason reason = ValidationReason::OK;
};

// Non-interactive validity check: replays every certificate vote through a
// fresh client-logic instance (per replica, in increasing sequence number)
// and requires that D is exactly what that state recomputes, then checks the
// past-perfection certificate against the replayed votes. Deterministic and
// side-effect free.
ValidationResult validPod(const Registry& registry, const PodData& data, const Certificates& certs);

}  // namespace pod
