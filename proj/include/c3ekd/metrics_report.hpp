#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "c3ekd/protocol.hpp"

namespace c3ekd {

// matches / total. Throws std::runtime_error on empty input,
// std::invalid_argument on length mismatch.
double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels);

// edge_acc / framework_acc. Throws std::runtime_error when framework_acc <= 0.
double relative_accuracy(double edge_acc, double framework_acc);

// uploads / total. Throws std::invalid_argument unless 0 <= uploads <= total
// and total > 0.
double upload_proportion(long long total_uploads, long long total_samples);

// One row of a paradigm-comparison table. accuracy is the final-round
// framework accuracy of the run.
struct ParadigmSummary {
    Paradigm paradigm = Paradigm::PureEdge;
    std::optional<double> tau;  // absent for the gate-free paradigms
    double upload_proportion = 0.0;
    double accuracy = 0.0;
    double avg_delay_s = 0.0;
};

ParadigmSummary summarize(const SimulationConfig& config, const SimulationResult& result);

// Writes rounds.csv (one row per round), summary.json (paradigm summaries,
// config echo, seed), and racc_trace.csv into out_dir, creating it if needed.
// Output is deterministic for identical inputs: fixed column order, fixed
// float formatting, delays printed in milliseconds with 3 decimals.
void emit(const std::vector<RoundReport>& reports,
          const std::vector<ParadigmSummary>& summaries,
          const nlohmann::json& config_echo, std::uint64_t seed,
          const std::string& out_dir);

}  // namespace c3ekd
