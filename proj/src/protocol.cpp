#include "c3ekd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "c3ekd/confidence_gate.hpp"
#include "c3ekd/metrics_report.hpp"
#include "c3ekd/rng.hpp"

namespace c3ekd {

std::string paradigm_name(Paradigm p) {
    switch (p) {
        case Paradigm::PureEdge: return "PureEdge";
        case Paradigm::PureCloud: return "PureCloud";
        case Paradigm::CollabNoUpdate: return "CollabNoUpdate";
        case Paradigm::C3ekd: return "C3EKD";
    }
    throw std::logic_error("paradigm_name: unknown paradigm");
}

Paradigm paradigm_from_name(const std::string& name) {
    if (name == "PureEdge") return Paradigm::PureEdge;
    if (name == "PureCloud") return Paradigm::PureCloud;
    if (name == "CollabNoUpdate") return Paradigm::CollabNoUpdate;
    if (name == "C3EKD") return Paradigm::C3ekd;
    throw std::invalid_argument("unknown paradigm '" + name + "'");
}

int SimulationConfig::stream_slots() const {
    int slots = 0;
    for (int j : cameras_per_school) slots += j;
    return slots;
}

long long SimulationConfig::stream_demand() const {
    return static_cast<long long>(rounds) * stream_slots() * images_per_camera_per_round;
}

int annotation_oracle(ProtocolState& state, const Sample& sample) {
    ++state.annotation_queries_total;
    return sample.label;
}

namespace {

// Uploads grouped per (school, camera), samples in ascending-id order, so the
// aggregate is independent of the arrival order.
using CameraGroups = std::map<std::pair<int, int>, std::vector<const UploadRecord*>>;

CameraGroups group_uploads(const std::vector<UploadRecord>& uploads) {
    CameraGroups groups;
    for (const UploadRecord& u : uploads)
        groups[{u.school, u.camera}].push_back(&u);
    for (auto& [slot, list] : groups)
        std::sort(list.begin(), list.end(), [](const UploadRecord* a, const UploadRecord* b) {
            return a->sample->id < b->sample->id;
        });
    return groups;
}

}  // namespace

RoundReport run_round(ProtocolState& state,
                      const std::vector<const Sample*>& round_samples,
                      int round_index) {
    const SimulationConfig& cfg = *state.config;
    const Paradigm paradigm = cfg.paradigm;

    // Mechanism 1: edge inference, confidence, gating.
    std::vector<UploadRecord> uploads;
    DelayLedger round_ledger;
    for (const Sample* s : round_samples) {
        Logits z = infer_logits(*state.edge_spec, state.edge_params, s->features);
        ProbDist p = softmax(z);
        bool uploaded;
        if (paradigm == Paradigm::PureEdge) {
            uploaded = false;
        } else if (paradigm == Paradigm::PureCloud) {
            uploaded = true;
        } else {
            uploaded = gate(confidence(p), cfg.tau).outcome == GateOutcome::UploadToCloud;
        }
        if (uploaded) {
            UploadRecord rec;
            rec.sample = s;
            rec.edge_soft = tempered_softmax(z, cfg.temperature);
            rec.edge_hard = p[1] > p[0] ? 1 : 0;
            rec.school = s->school;
            rec.camera = s->camera;
            uploads.push_back(std::move(rec));
        }
        double d = sample_delay(uploaded, *state.link);
        round_ledger.add(d);
        state.delay_ledger.add(d);
    }
    state.total_uploads += static_cast<long long>(uploads.size());
    state.total_streamed += static_cast<long long>(round_samples.size());

    // Mechanism 2: cloud soft labels, dual-pathway loss, hierarchical
    // aggregation, and (for the full protocol) the edge update.
    std::optional<double> global_loss;
    int round_queries = 0;
    if (!uploads.empty()) {
        CameraGroups groups = group_uploads(uploads);

        // schools with at least one upload, and their active camera counts
        std::map<int, int> cameras_with_uploads;
        for (const auto& [slot, list] : groups) cameras_with_uploads[slot.first] += 1;
        const double k_active = static_cast<double>(cameras_with_uploads.size());

        std::vector<SampleLossSpec> batch;
        batch.reserve(uploads.size());
        double loss_sum = 0.0;
        for (const auto& [slot, list] : groups) {
            const double j_active = static_cast<double>(cameras_with_uploads[slot.first]);
            const double w = 1.0 / (k_active * j_active * static_cast<double>(list.size()));
            for (const UploadRecord* u : list) {
                Logits zc = infer_logits(*state.cloud_spec, *state.cloud_params,
                                         u->sample->features);
                ProbDist cloud_p1 = softmax(zc);
                int cloud_hard = cloud_p1[1] > cloud_p1[0] ? 1 : 0;

                SampleLossSpec ls;
                ls.sample = u->sample;
                ls.temperature = cfg.temperature;
                ls.alpha = cfg.alpha;
                ls.cloud_soft = tempered_softmax(zc, cfg.temperature);
                ls.weight = w;
                ls.kd_t_squared = cfg.kd_t_squared;
                bool consistent = (u->edge_hard == cloud_hard);
                if (consistent && !cfg.annotate_all_uploads) {
                    ls.kind = LossKind::KdOnly;
                } else {
                    ls.kind = LossKind::Combined;
                    ls.y_true = annotation_oracle(state, *u->sample);
                    ++round_queries;
                }
                Logits ze = infer_logits(*state.edge_spec, state.edge_params,
                                         u->sample->features);
                loss_sum += w * sample_loss(ls, ze);
                batch.push_back(std::move(ls));
            }
        }
        if (!std::isfinite(loss_sum))
            throw std::runtime_error("run_round: global loss became non-finite in round " +
                                     std::to_string(round_index + 1));
        global_loss = loss_sum;

        if (paradigm == Paradigm::C3ekd) {
            std::vector<double> grad = loss_gradient(*state.edge_spec, state.edge_params, batch);
            state.edge_params = apply_update(state.edge_params, grad, cfg.eta);
        }
    }

    // Evaluate on the fixed test set (after the update, so the report shows
    // the broadcast model).
    const std::vector<Sample>& test = *state.test_set;
    std::vector<int> framework_pred(test.size()), edge_pred(test.size()), labels(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        auto [edge_hard, p] = predict(*state.edge_spec, state.edge_params, test[i].features);
        edge_pred[i] = edge_hard;
        labels[i] = test[i].label;
        if (paradigm == Paradigm::PureEdge) {
            framework_pred[i] = edge_hard;
        } else if (paradigm == Paradigm::PureCloud) {
            framework_pred[i] = state.cloud_test_hard[i];
        } else {
            bool accept = gate(confidence(p), cfg.tau).outcome == GateOutcome::AcceptLocal;
            framework_pred[i] = accept ? edge_hard : state.cloud_test_hard[i];
        }
    }

    RoundReport report;
    report.round = round_index + 1;
    report.uploads = static_cast<int>(uploads.size());
    report.stream_count = static_cast<int>(round_samples.size());
    report.global_loss = global_loss;
    report.framework_accuracy = accuracy(framework_pred, labels);
    report.edge_accuracy = accuracy(edge_pred, labels);
    report.relative_accuracy =
        relative_accuracy(report.edge_accuracy, report.framework_accuracy);
    report.avg_delay_s = average_delay(round_ledger);
    report.upload_proportion_cumulative =
        upload_proportion(state.total_uploads, state.total_streamed);
    report.annotation_queries = round_queries;
    return report;
}

SimulationResult run_simulation(const SimulationConfig& config,
                                const DatasetBundle& bundle,
                                const ClassifierSpec& edge_spec,
                                const ClassifierParams& edge_params,
                                const ClassifierSpec& cloud_spec,
                                const ClassifierParams& cloud_params,
                                const LinkConfig& link) {
    if (config.schools <= 0 || config.rounds <= 0 || config.images_per_camera_per_round <= 0)
        throw std::invalid_argument("run_simulation: schools, rounds, and images must be positive");
    if (static_cast<int>(config.cameras_per_school.size()) != config.schools)
        throw std::invalid_argument("run_simulation: cameras_per_school size must equal schools");
    for (int j : config.cameras_per_school)
        if (j <= 0) throw std::invalid_argument("run_simulation: camera counts must be positive");
    if (config.tau < 0.0 || config.tau > 1.0)
        throw std::invalid_argument("run_simulation: tau outside [0,1]");
    if (!(config.temperature > 0.0))
        throw std::invalid_argument("run_simulation: temperature must be positive");
    if (config.stream_demand() > static_cast<long long>(bundle.simulation.size()))
        throw std::invalid_argument(
            "run_simulation: stream demand " + std::to_string(config.stream_demand()) +
            " exceeds simulation set size " + std::to_string(bundle.simulation.size()));
    if (bundle.test.empty())
        throw std::invalid_argument("run_simulation: empty test set");

    // Stream plan: one seeded shuffle, then consecutive blocks per round,
    // dealt round-robin across (school, camera) slots.
    std::vector<Sample> stream = bundle.simulation;
    Rng plan_rng(derive_seed(config.seed, kSeedStreamPlan));
    plan_rng.shuffle(stream);

    std::vector<std::pair<int, int>> slots;
    for (int k = 0; k < config.schools; ++k)
        for (int j = 0; j < config.cameras_per_school[k]; ++j) slots.emplace_back(k, j);
    const int per_round = static_cast<int>(slots.size()) * config.images_per_camera_per_round;

    ProtocolState state;
    state.config = &config;
    state.link = &link;
    state.edge_spec = &edge_spec;
    state.cloud_spec = &cloud_spec;
    state.cloud_params = &cloud_params;
    state.edge_params = edge_params;
    state.test_set = &bundle.test;
    state.cloud_test_hard.resize(bundle.test.size());
    for (std::size_t i = 0; i < bundle.test.size(); ++i)
        state.cloud_test_hard[i] =
            predict(cloud_spec, cloud_params, bundle.test[i].features).first;

    SimulationResult result;
    result.rounds.reserve(config.rounds);
    for (int r = 0; r < config.rounds; ++r) {
        std::vector<const Sample*> round_samples;
        round_samples.reserve(per_round);
        for (int i = 0; i < per_round; ++i) {
            Sample& s = stream[static_cast<std::size_t>(r) * per_round + i];
            const auto& [school, camera] = slots[i % slots.size()];
            s.school = school;
            s.camera = camera;
            s.round = r + 1;
            round_samples.push_back(&s);
        }
        result.rounds.push_back(run_round(state, round_samples, r));
    }

    result.final_framework_accuracy = result.rounds.back().framework_accuracy;
    result.cumulative_upload_proportion =
        upload_proportion(state.total_uploads, state.total_streamed);
    result.overall_avg_delay_s = average_delay(state.delay_ledger);
    result.total_annotation_queries = state.annotation_queries_total;
    result.final_edge_params = std::move(state.edge_params);
    return result;
}

}  // namespace c3ekd
