#include "c3ekd/config.hpp"

#include <fstream>
#include <stdexcept>

#include "c3ekd/rng.hpp"

namespace c3ekd {

namespace {

SynthTask task_from_name(const std::string& s) {
    if (s == "xor-blobs") return SynthTask::XorBlobs;
    if (s == "rings") return SynthTask::Rings;
    throw std::runtime_error("config: unknown task '" + s + "' (expected xor-blobs or rings)");
}

const char* task_name(SynthTask t) {
    return t == SynthTask::XorBlobs ? "xor-blobs" : "rings";
}

ModelKind model_kind_from_name(const std::string& s) {
    if (s == "linear-softmax") return ModelKind::LinearSoftmax;
    if (s == "mlp") return ModelKind::Mlp;
    throw std::runtime_error("config: unknown model kind '" + s + "'");
}

Activation activation_from_name(const std::string& s) {
    if (s == "relu") return Activation::Relu;
    if (s == "tanh") return Activation::Tanh;
    throw std::runtime_error("config: unknown activation '" + s + "'");
}

void parse_model(const nlohmann::json& j, ClassifierSpec& spec) {
    if (j.contains("kind")) spec.kind = model_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("hidden_dim")) spec.hidden_dim = j.at("hidden_dim").get<int>();
    if (j.contains("activation"))
        spec.activation = activation_from_name(j.at("activation").get<std::string>());
}

template <class T>
void take(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("simulation")) {
        const auto& s = j.at("simulation");
        take(s, "schools", cfg.simulation.schools);
        take(s, "cameras_per_school", cfg.simulation.cameras_per_school);
        take(s, "rounds", cfg.simulation.rounds);
        take(s, "images_per_camera_per_round", cfg.simulation.images_per_camera_per_round);
        take(s, "tau", cfg.simulation.tau);
        take(s, "temperature", cfg.simulation.temperature);
        take(s, "alpha", cfg.simulation.alpha);
        take(s, "eta", cfg.simulation.eta);
        take(s, "seed", cfg.simulation.seed);
        if (s.contains("paradigm"))
            cfg.simulation.paradigm = paradigm_from_name(s.at("paradigm").get<std::string>());
        take(s, "annotate_all_uploads", cfg.simulation.annotate_all_uploads);
        take(s, "kd_t_squared", cfg.simulation.kd_t_squared);
    }
    if (j.contains("link")) {
        const auto& l = j.at("link");
        take(l, "image_size_bits", cfg.link.image_size_bits);
        take(l, "bw_local_to_edge_bps", cfg.link.bw_local_to_edge_bps);
        take(l, "bw_edge_to_cloud_bps", cfg.link.bw_edge_to_cloud_bps);
        take(l, "fixed_latency_per_hop_s", cfg.link.fixed_latency_per_hop_s);
    }
    if (j.contains("edge_model")) parse_model(j.at("edge_model"), cfg.edge_model);
    if (j.contains("cloud_model")) parse_model(j.at("cloud_model"), cfg.cloud_model);
    if (j.contains("training")) {
        const auto& t = j.at("training");
        take(t, "edge_epochs", cfg.training.edge_epochs);
        take(t, "edge_lr", cfg.training.edge_lr);
        take(t, "cloud_epochs", cfg.training.cloud_epochs);
        take(t, "cloud_lr", cfg.training.cloud_lr);
    }
    if (j.contains("datagen")) {
        const auto& d = j.at("datagen");
        if (d.contains("task")) cfg.datagen.task = task_from_name(d.at("task").get<std::string>());
        take(d, "n", cfg.datagen.n);
        take(d, "feature_dim", cfg.datagen.feature_dim);
        take(d, "sigma", cfg.datagen.sigma);
        take(d, "cluster_skew", cfg.datagen.cluster_skew);
        take(d, "f_train", cfg.datagen.f_train);
        take(d, "f_sim", cfg.datagen.f_sim);
        take(d, "f_test", cfg.datagen.f_test);
        if (d.contains("csv_path") && !d.at("csv_path").is_null())
            cfg.datagen.csv_path = d.at("csv_path").get<std::string>();
    }
    if (j.contains("checkpoint")) {
        const auto& c = j.at("checkpoint");
        if (c.contains("format")) {
            std::string f = c.at("format").get<std::string>();
            if (f == "json") {
                cfg.checkpoint.format = CheckpointFormat::Json;
            } else if (f == "binary") {
                cfg.checkpoint.format = CheckpointFormat::Binary;
            } else {
                throw std::runtime_error("config: checkpoint format must be json or binary");
            }
        }
        if (c.contains("path") && !c.at("path").is_null())
            cfg.checkpoint.path = c.at("path").get<std::string>();
    }
    cfg.edge_model.input_dim = cfg.datagen.feature_dim;
    cfg.cloud_model.input_dim = cfg.datagen.feature_dim;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config: bad JSON in " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["simulation"] = {
        {"schools", cfg.simulation.schools},
        {"cameras_per_school", cfg.simulation.cameras_per_school},
        {"rounds", cfg.simulation.rounds},
        {"images_per_camera_per_round", cfg.simulation.images_per_camera_per_round},
        {"tau", cfg.simulation.tau},
        {"temperature", cfg.simulation.temperature},
        {"alpha", cfg.simulation.alpha},
        {"eta", cfg.simulation.eta},
        {"seed", cfg.simulation.seed},
        {"paradigm", paradigm_name(cfg.simulation.paradigm)},
        {"annotate_all_uploads", cfg.simulation.annotate_all_uploads},
        {"kd_t_squared", cfg.simulation.kd_t_squared},
    };
    j["link"] = {
        {"image_size_bits", cfg.link.image_size_bits},
        {"bw_local_to_edge_bps", cfg.link.bw_local_to_edge_bps},
        {"bw_edge_to_cloud_bps", cfg.link.bw_edge_to_cloud_bps},
        {"fixed_latency_per_hop_s", cfg.link.fixed_latency_per_hop_s},
    };
    auto model_json = [](const ClassifierSpec& s) {
        nlohmann::json m;
        m["kind"] = s.kind == ModelKind::LinearSoftmax ? "linear-softmax" : "mlp";
        m["input_dim"] = s.input_dim;
        if (s.kind == ModelKind::Mlp) {
            m["hidden_dim"] = s.hidden_dim;
            m["activation"] = s.activation == Activation::Relu ? "relu" : "tanh";
        }
        return m;
    };
    j["edge_model"] = model_json(cfg.edge_model);
    j["cloud_model"] = model_json(cfg.cloud_model);
    j["training"] = {
        {"edge_epochs", cfg.training.edge_epochs},
        {"edge_lr", cfg.training.edge_lr},
        {"cloud_epochs", cfg.training.cloud_epochs},
        {"cloud_lr", cfg.training.cloud_lr},
    };
    j["datagen"] = {
        {"task", task_name(cfg.datagen.task)},
        {"n", cfg.datagen.n},
        {"feature_dim", cfg.datagen.feature_dim},
        {"sigma", cfg.datagen.sigma},
        {"cluster_skew", cfg.datagen.cluster_skew},
        {"f_train", cfg.datagen.f_train},
        {"f_sim", cfg.datagen.f_sim},
        {"f_test", cfg.datagen.f_test},
    };
    if (cfg.datagen.csv_path) j["datagen"]["csv_path"] = *cfg.datagen.csv_path;
    return j;
}

Experiment prepare_experiment(const RunConfig& cfg) {
    const std::uint64_t seed = cfg.simulation.seed;
    std::vector<Sample> all;
    if (cfg.datagen.csv_path) {
        all = load_csv(*cfg.datagen.csv_path);
    } else {
        all = generate_synthetic(cfg.datagen.n, cfg.datagen.feature_dim,
                                 derive_seed(seed, kSeedStreamDataset), cfg.datagen.task,
                                 cfg.datagen.sigma, cfg.datagen.cluster_skew);
    }

    Experiment exp;
    exp.bundle = split(all, cfg.datagen.f_train, cfg.datagen.f_sim, cfg.datagen.f_test,
                       derive_seed(seed, kSeedStreamSplit));
    exp.edge_spec = cfg.edge_model;
    exp.cloud_spec = cfg.cloud_model;
    exp.edge_spec.input_dim = exp.bundle.feature_dim;
    exp.cloud_spec.input_dim = exp.bundle.feature_dim;
    exp.edge_params = train_initial(exp.edge_spec, exp.bundle.train,
                                    cfg.training.edge_epochs, cfg.training.edge_lr,
                                    derive_seed(seed, kSeedStreamEdgeInit));
    exp.cloud_params = train_initial(exp.cloud_spec, exp.bundle.train,
                                     cfg.training.cloud_epochs, cfg.training.cloud_lr,
                                     derive_seed(seed, kSeedStreamCloudInit));
    return exp;
}

SimulationResult run_experiment(const RunConfig& cfg, const Experiment& exp) {
    return run_simulation(cfg.simulation, exp.bundle, exp.edge_spec, exp.edge_params,
                          exp.cloud_spec, exp.cloud_params, cfg.link);
}

}  // namespace c3ekd
