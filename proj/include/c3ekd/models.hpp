#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "c3ekd/numerics.hpp"

namespace c3ekd {

// One unit of data flowing through the protocol. school/camera/round are -1
// until the sample is dealt to a stream slot; origin marks train/test samples.
struct Sample {
    long long id = 0;
    std::vector<double> features;
    int label = 0;  // 0 = Non-ASD, 1 = ASD
    int school = -1;
    int camera = -1;
    int round = -1;
    std::string origin;
};

enum class ModelKind { LinearSoftmax, Mlp };
enum class Activation { Relu, Tanh };

// Architecture description. The student is a linear-softmax model; the
// teacher is a one-hidden-layer MLP. hidden_dim/activation apply to the MLP
// only.
struct ClassifierSpec {
    ModelKind kind = ModelKind::LinearSoftmax;
    int input_dim = 2;
    int hidden_dim = 0;
    Activation activation = Activation::Relu;

    int param_count() const;
};

// Flat parameter vector plus a version that increments once per applied
// update. Layouts (row-major):
//   linear-softmax: W (2 x input_dim), b (2)
//   mlp:            W1 (hidden x input_dim), b1 (hidden), W2 (2 x hidden), b2 (2)
struct ClassifierParams {
    std::vector<double> flat;
    long long version = 0;
};

// Which loss applies to a sample in a gradient batch.
enum class LossKind { KdOnly, CeOnly, Combined };

struct SampleLossSpec {
    const Sample* sample = nullptr;
    LossKind kind = LossKind::CeOnly;
    double temperature = 1.0;
    double alpha = 0.5;
    ProbDist cloud_soft;  // KdOnly / Combined
    int y_true = -1;      // CeOnly / Combined
    double weight = 1.0;  // aggregation weight; all-1 gives the plain mean
    // When true, the distillation term (loss and gradient) is scaled by T^2.
    // Off by default; exposed as a config extension point.
    bool kd_t_squared = false;
};

// Deterministic forward pass. Throws std::invalid_argument on dimension
// mismatch.
Logits infer_logits(const ClassifierSpec& spec, const ClassifierParams& params,
                    const std::vector<double>& features);

// argmax of softmax(infer_logits) plus the distribution; an exact tie is
// broken toward class 0.
std::pair<int, ProbDist> predict(const ClassifierSpec& spec,
                                 const ClassifierParams& params,
                                 const std::vector<double>& features);

// Per-sample loss value for a SampleLossSpec, given the edge logits.
double sample_loss(const SampleLossSpec& ls, const Logits& edge_logits);

// Analytic gradient of sum_i w_i * L_i / sum_i w_i with respect to params.
// With unit weights this is the gradient of the mean per-sample loss. Throws
// std::invalid_argument on an empty batch.
std::vector<double> loss_gradient(const ClassifierSpec& spec,
                                  const ClassifierParams& params,
                                  const std::vector<SampleLossSpec>& batch);

// Uniform [-0.1, 0.1] initialization from the seeded generator.
ClassifierParams init_params(const ClassifierSpec& spec, std::uint64_t seed);

// Full-batch gradient descent on mean cross-entropy. Deterministic given the
// seed (which drives only the initialization). Returns params with version 0.
// Throws std::runtime_error if the loss becomes non-finite.
ClassifierParams train_initial(const ClassifierSpec& spec,
                               const std::vector<Sample>& train_set, int epochs,
                               double lr, std::uint64_t seed);

// flat' = flat - eta * gradient; version incremented by exactly 1.
ClassifierParams apply_update(const ClassifierParams& params,
                              const std::vector<double>& gradient, double eta);

enum class CheckpointFormat { Json, Binary };

// Versioned checkpoint with an architecture header. Binary files are
// little-endian; JSON files store the flat vector as a number array.
void save_checkpoint(const std::string& path, const ClassifierSpec& spec,
                     const ClassifierParams& params, CheckpointFormat format);
std::pair<ClassifierSpec, ClassifierParams> load_checkpoint(const std::string& path);

}  // namespace c3ekd
