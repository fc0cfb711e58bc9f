#include "c3ekd/confidence_gate.hpp"

#include <cmath>
#include <stdexcept>

namespace c3ekd {

double confidence(const ProbDist& dist) {
    if (dist.size() != 2)
        throw std::invalid_argument("confidence: expected a binary distribution");
    return std::abs(dist[0] - dist[1]);
}

GateDecision gate(double score, double tau) {
    if (tau < 0.0 || tau > 1.0)
        throw std::invalid_argument("gate: tau outside [0,1]");
    GateOutcome out = (score >= tau) ? GateOutcome::AcceptLocal
                                     : GateOutcome::UploadToCloud;
    return GateDecision{out, score, tau};
}

}  // namespace c3ekd
