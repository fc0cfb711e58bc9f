#include "c3ekd/metrics_report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace c3ekd {

double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("accuracy: length mismatch");
    if (predictions.empty())
        throw std::runtime_error("accuracy: undefined on empty input");
    long long matches = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i] == labels[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(predictions.size());
}

double relative_accuracy(double edge_acc, double framework_acc) {
    if (!(framework_acc > 0.0))
        throw std::runtime_error("relative_accuracy: undefined for zero framework accuracy");
    return edge_acc / framework_acc;
}

double upload_proportion(long long total_uploads, long long total_samples) {
    if (total_samples <= 0)
        throw std::invalid_argument("upload_proportion: total_samples must be positive");
    if (total_uploads < 0 || total_uploads > total_samples)
        throw std::invalid_argument("upload_proportion: uploads outside [0, total]");
    return static_cast<double>(total_uploads) / static_cast<double>(total_samples);
}

ParadigmSummary summarize(const SimulationConfig& config, const SimulationResult& result) {
    ParadigmSummary s;
    s.paradigm = config.paradigm;
    if (config.paradigm == Paradigm::CollabNoUpdate || config.paradigm == Paradigm::C3ekd)
        s.tau = config.tau;
    s.upload_proportion = result.cumulative_upload_proportion;
    s.accuracy = result.final_framework_accuracy;
    s.avg_delay_s = result.overall_avg_delay_s;
    return s;
}

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("emit: write failed for " + path.string());
}

}  // namespace

void emit(const std::vector<RoundReport>& reports,
          const std::vector<ParadigmSummary>& summaries,
          const nlohmann::json& config_echo, std::uint64_t seed,
          const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit: cannot create directory " + out_dir);

    std::string rounds_csv = "r,uploads,global_loss,framework_acc,edge_acc,rAcc,avg_delay_ms\n";
    std::string racc_csv = "r,rAcc\n";
    for (const RoundReport& r : reports) {
        rounds_csv += std::to_string(r.round) + ',' + std::to_string(r.uploads) + ',';
        if (r.global_loss) rounds_csv += fmt("%.9g", *r.global_loss);
        rounds_csv += ',' + fmt("%.6f", r.framework_accuracy) + ',' +
                      fmt("%.6f", r.edge_accuracy) + ',' +
                      fmt("%.6f", r.relative_accuracy) + ',' +
                      fmt("%.3f", r.avg_delay_s * 1000.0) + '\n';
        racc_csv += std::to_string(r.round) + ',' + fmt("%.6f", r.relative_accuracy) + '\n';
    }
    write_file(dir / "rounds.csv", rounds_csv);
    write_file(dir / "racc_trace.csv", racc_csv);

    nlohmann::json j;
    j["seed"] = seed;
    j["config"] = config_echo;
    nlohmann::json list = nlohmann::json::array();
    for (const ParadigmSummary& s : summaries) {
        nlohmann::json row;
        row["paradigm"] = paradigm_name(s.paradigm);
        if (s.tau) row["tau"] = *s.tau;
        row["upload_proportion"] = s.upload_proportion;
        row["accuracy"] = s.accuracy;
        row["avg_delay_ms"] = s.avg_delay_s * 1000.0;
        list.push_back(row);
    }
    j["paradigms"] = list;
    write_file(dir / "summary.json", j.dump(2) + "\n");
}

}  // namespace c3ekd
