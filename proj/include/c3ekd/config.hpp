#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "c3ekd/datagen.hpp"
#include "c3ekd/models.hpp"
#include "c3ekd/network_model.hpp"
#include "c3ekd/protocol.hpp"

namespace c3ekd {

struct TrainingConfig {
    int edge_epochs = 200;
    double edge_lr = 0.5;
    int cloud_epochs = 300;
    double cloud_lr = 0.5;
};

struct DatagenParams {
    SynthTask task = SynthTask::XorBlobs;
    int n = 5760;
    int feature_dim = 2;
    double sigma = 0.35;
    double cluster_skew = 0.62;
    double f_train = 0.4;
    double f_sim = 0.5;
    double f_test = 0.1;
    std::optional<std::string> csv_path;  // when set, load features instead of generating
};

struct CheckpointConfig {
    CheckpointFormat format = CheckpointFormat::Json;
    std::optional<std::string> path;  // save final edge params here when set
};

// Full run configuration: everything an experiment needs.
struct RunConfig {
    SimulationConfig simulation;
    LinkConfig link;
    ClassifierSpec edge_model{ModelKind::LinearSoftmax, 2, 0, Activation::Relu};
    ClassifierSpec cloud_model{ModelKind::Mlp, 2, 3, Activation::Relu};
    TrainingConfig training;
    DatagenParams datagen;
    CheckpointConfig checkpoint;
};

// Parse a JSON run config; missing fields keep their defaults. Throws
// std::runtime_error with a diagnostic on malformed input.
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json(const nlohmann::json& j);

// JSON echo of a config, byte-stable for identical configs.
nlohmann::json run_config_to_json(const RunConfig& cfg);

// Data plus both trained models for one seed; built once and reused across
// paradigm runs.
struct Experiment {
    DatasetBundle bundle;
    ClassifierSpec edge_spec;
    ClassifierParams edge_params;
    ClassifierSpec cloud_spec;
    ClassifierParams cloud_params;
};

// Generate (or load) the dataset, split it, and train both models, all from
// sub-seeds of cfg.simulation.seed.
Experiment prepare_experiment(const RunConfig& cfg);

// Run one simulation for the prepared experiment under cfg.simulation.
SimulationResult run_experiment(const RunConfig& cfg, const Experiment& exp);

}  // namespace c3ekd
