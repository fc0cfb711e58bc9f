#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c3ekd/models.hpp"

namespace c3ekd {

struct DatasetBundle {
    std::vector<Sample> train;
    std::vector<Sample> simulation;
    std::vector<Sample> test;
    int feature_dim = 0;
    std::uint64_t seed = 0;
};

enum class SynthTask { XorBlobs, Rings };

// Synthetic two-class data with a nonlinear decision boundary, deterministic
// in the seed.
//
// xor-blobs: four Gaussian clusters at (+-1, +-1) with XOR labels, noise
// sigma on the first two dimensions, standard-normal noise on any extra
// dimensions. cluster_skew is the fraction of each class drawn from its
// primary cluster ((1,1) for class 0, (1,-1) for class 1); 0.5 is the fully
// symmetric layout. Counts use largest-remainder allocation, so class balance
// holds to within one sample.
//
// rings: class 0 on a radius-1 circle, class 1 on a radius-2 circle, with
// radial noise sigma.
std::vector<Sample> generate_synthetic(int n, int feature_dim, std::uint64_t seed,
                                       SynthTask task, double sigma = 0.35,
                                       double cluster_skew = 0.62);

// Seeded shuffle then contiguous cut into train/simulation/test. Simulation
// and test counts are floor(fraction * n); the remainder goes to train.
// Throws std::invalid_argument if the fractions do not sum to 1 (tolerance
// 1e-9).
DatasetBundle split(const std::vector<Sample>& samples, double f_train,
                    double f_sim, double f_test, std::uint64_t seed);

// CSV with header `id,label,f1,...,fd`; label must be 0 or 1. Parse errors
// carry the 1-based line number; duplicate ids are rejected. A header-only
// file yields an empty list.
std::vector<Sample> load_csv(const std::string& path);

}  // namespace c3ekd
