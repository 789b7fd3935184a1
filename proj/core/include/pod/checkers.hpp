#pragma once

#include <string>
#include <vector>

#include "pod/simnet.hpp"

namespace pod::sim {

struct CheckFailure {
    std::string property;
    std::string detail;
};

struct CheckOptions {
    bool confirmationWithin2Delta = true;
    bool pastPerfectionWithinDelta = true;
    bool pairwiseSafety = true;
    bool timeliness = true;
    bool monotonicity = true;
    bool replicaLogs = true;
    bool noFraming = true;
    // Validate every k-th snapshot through valid(); 0 disables.
    std::size_t validatorSampleEvery = 0;
};

// Runs every enabled property over a finished simulation. An empty result
// means the run satisfied everything; each failure carries the seed so the
// run can be replayed.
std::vector<CheckFailure> checkAll(const Simulation& sim, const CheckOptions& options = {});

// Individual properties (each appends failures).
void checkConfirmationWithin2Delta(const Simulation& sim, std::vector<CheckFailure>& out);
void checkPastPerfectionWithinDelta(const Simulation& sim, std::vector<CheckFailure>& out);
void checkPairwiseSafety(const Simulation& sim, std::vector<CheckFailure>& out);
void checkTimeliness(const Simulation& sim, std::vector<CheckFailure>& out);
void checkMonotonicity(const Simulation& sim, std::vector<CheckFailure>& out);
void checkReplicaLogs(const Simulation& sim, std::vector<CheckFailure>& out);
void checkNoFraming(const Simulation& sim, std::vector<CheckFailure>& out);
void checkValidatorSoundness(const Simulation& sim, std::size_t sampleEvery,
                             std::vector<CheckFailure>& out);

}  // namespace pod::sim
