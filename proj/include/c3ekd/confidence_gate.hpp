#pragma once

#include "c3ekd/numerics.hpp"

namespace c3ekd {

enum class GateOutcome { AcceptLocal, UploadToCloud };

struct GateDecision {
    GateOutcome outcome;
    double score;
    double threshold;
};

// Absolute difference of the two class probabilities: |p0 - p1|.
// Throws std::invalid_argument unless the distribution is binary.
double confidence(const ProbDist& dist);

// AcceptLocal when score >= tau, UploadToCloud when score < tau; a score
// exactly at the threshold is accepted locally. Throws std::invalid_argument
// if tau is outside [0, 1].
GateDecision gate(double score, double tau);

}  // namespace c3ekd
