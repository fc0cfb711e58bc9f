#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "c3ekd/datagen.hpp"
#include "c3ekd/models.hpp"
#include "c3ekd/network_model.hpp"

namespace c3ekd {

enum class Paradigm { PureEdge, PureCloud, CollabNoUpdate, C3ekd };

std::string paradigm_name(Paradigm p);
Paradigm paradigm_from_name(const std::string& name);

// Sub-seed stream ids. Every random component of an experiment draws from
// derive_seed(config seed, one of these), so components can be re-created
// independently and in any order.
constexpr std::uint64_t kSeedStreamDataset = 0;
constexpr std::uint64_t kSeedStreamSplit = 1;
constexpr std::uint64_t kSeedStreamEdgeInit = 2;
constexpr std::uint64_t kSeedStreamCloudInit = 3;
constexpr std::uint64_t kSeedStreamPlan = 4;

struct SimulationConfig {
    int schools = 3;
    std::vector<int> cameras_per_school = {1, 1, 1};
    int rounds = 60;
    int images_per_camera_per_round = 16;
    double tau = 0.2;
    double temperature = 1.5;
    double alpha = 0.5;
    double eta = 0.4;
    std::uint64_t seed = 1;
    Paradigm paradigm = Paradigm::C3ekd;
    // Request an annotation for every upload (instead of only when edge and
    // cloud hard predictions disagree).
    bool annotate_all_uploads = false;
    // Scale the distillation term by T^2 (off by default).
    bool kd_t_squared = false;

    int stream_slots() const;            // total (school, camera) pairs
    long long stream_demand() const;     // rounds * slots * images
};

struct UploadRecord {
    const Sample* sample = nullptr;
    ProbDist edge_soft;  // tempered at T
    int edge_hard = 0;
    int school = 0;
    int camera = 0;
};

struct RoundReport {
    int round = 0;  // 1-based
    int uploads = 0;
    int stream_count = 0;
    std::optional<double> global_loss;  // absent when nothing was uploaded
    double framework_accuracy = 0.0;
    double edge_accuracy = 0.0;
    double relative_accuracy = 0.0;
    double avg_delay_s = 0.0;  // this round's streamed samples
    double upload_proportion_cumulative = 0.0;
    int annotation_queries = 0;  // this round
};

struct SimulationResult {
    std::vector<RoundReport> rounds;
    double final_framework_accuracy = 0.0;
    double cumulative_upload_proportion = 0.0;
    double overall_avg_delay_s = 0.0;
    long long total_annotation_queries = 0;
    ClassifierParams final_edge_params;
};

// Mutable state threaded through run_round.
struct ProtocolState {
    const SimulationConfig* config = nullptr;
    const LinkConfig* link = nullptr;
    const ClassifierSpec* edge_spec = nullptr;
    const ClassifierSpec* cloud_spec = nullptr;
    const ClassifierParams* cloud_params = nullptr;  // frozen
    ClassifierParams edge_params;                    // broadcast copy, updated per round
    const std::vector<Sample>* test_set = nullptr;
    std::vector<int> cloud_test_hard;  // cached cloud predictions on the test set
    DelayLedger delay_ledger;          // cumulative over the whole run
    long long total_uploads = 0;
    long long total_streamed = 0;
    long long annotation_queries_total = 0;
};

// Ground-truth label lookup standing in for the clinician; bumps the state's
// query counter.
int annotation_oracle(ProtocolState& state, const Sample& sample);

// One protocol round. round_samples must already carry (school, camera)
// provenance from the stream plan. Throws std::runtime_error if the loss
// becomes non-finite.
RoundReport run_round(ProtocolState& state,
                      const std::vector<const Sample*>& round_samples,
                      int round_index);

// R sequential rounds over the bundle's simulation stream. The bundle must be
// split and both models trained before calling. Throws std::invalid_argument
// if the stream demand exceeds the simulation set.
SimulationResult run_simulation(const SimulationConfig& config,
                                const DatasetBundle& bundle,
                                const ClassifierSpec& edge_spec,
                                const ClassifierParams& edge_params,
                                const ClassifierSpec& cloud_spec,
                                const ClassifierParams& cloud_params,
                                const LinkConfig& link);

}  // namespace c3ekd
