// Command-line front end for the C3EKD protocol simulator.
//
// Single-run mode (default): run one paradigm and write rounds.csv,
// racc_trace.csv, and summary.json into --out.
//
// Sweep mode (--sweep 0.1,0.2,0.3): run PureEdge and PureCloud once, plus
// CollabNoUpdate and C3EKD at every listed threshold, each into its own
// subdirectory, and write a combined summary.json at the top level.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "c3ekd/config.hpp"
#include "c3ekd/metrics_report.hpp"
#include "c3ekd/protocol.hpp"

using namespace c3ekd;

namespace {

std::string fmt_tau(double tau) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", tau);
    return buf;
}

nlohmann::json summary_row(const ParadigmSummary& s) {
    nlohmann::json row;
    row["paradigm"] = paradigm_name(s.paradigm);
    if (s.tau) row["tau"] = *s.tau;
    row["upload_proportion"] = s.upload_proportion;
    row["accuracy"] = s.accuracy;
    row["avg_delay_ms"] = s.avg_delay_s * 1000.0;
    return row;
}

void print_row(const ParadigmSummary& s) {
    std::string name = paradigm_name(s.paradigm);
    if (s.tau) name += " (tau=" + fmt_tau(*s.tau) + ")";
    std::printf("%-28s accuracy %.4f  uploads %.3f  avg delay %.3f ms\n", name.c_str(),
                s.accuracy, s.upload_proportion, s.avg_delay_s * 1000.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"C3EKD cloud-edge collaborative diagnosis simulator"};

    std::string config_path;
    std::string out_dir = "out";
    std::string paradigm_name_arg;
    std::string checkpoint_out;
    double tau = -1.0;
    int rounds = -1;
    long long seed = -1;
    std::string sweep_arg;

    app.add_option("--config", config_path, "JSON run configuration file");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--tau", tau, "confidence threshold in [0,1]");
    app.add_option("--rounds", rounds, "number of simulation rounds");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--paradigm", paradigm_name_arg,
                   "PureEdge | PureCloud | CollabNoUpdate | C3EKD");
    app.add_option("--sweep", sweep_arg,
                   "thresholds for a full paradigm comparison, e.g. tau=0.1,0.2,0.3");
    app.add_option("--checkpoint-out", checkpoint_out,
                   "write the final edge model checkpoint to this path");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<double> sweep_taus;
        if (!sweep_arg.empty()) {
            std::string list = sweep_arg;
            if (list.rfind("tau=", 0) == 0) list = list.substr(4);
            std::size_t pos = 0;
            while (pos <= list.size()) {
                std::size_t comma = list.find(',', pos);
                std::string tok = list.substr(pos, comma - pos);
                double v = 0.0;
                try {
                    std::size_t used = 0;
                    v = std::stod(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw std::runtime_error("--sweep: bad threshold '" + tok + "'");
                }
                sweep_taus.push_back(v);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (sweep_taus.empty()) throw std::runtime_error("--sweep: empty threshold list");
        }

        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (tau >= 0.0) cfg.simulation.tau = tau;
        if (rounds > 0) cfg.simulation.rounds = rounds;
        if (seed >= 0) cfg.simulation.seed = static_cast<std::uint64_t>(seed);
        if (!paradigm_name_arg.empty())
            cfg.simulation.paradigm = paradigm_from_name(paradigm_name_arg);
        if (!checkpoint_out.empty()) cfg.checkpoint.path = checkpoint_out;

        Experiment exp = prepare_experiment(cfg);

        if (!sweep_taus.empty()) {
            nlohmann::json combined;
            combined["seed"] = cfg.simulation.seed;
            combined["config"] = run_config_to_json(cfg);
            nlohmann::json rows = nlohmann::json::array();

            auto run_one = [&](Paradigm p, double run_tau, const std::string& label) {
                RunConfig rc = cfg;
                rc.simulation.paradigm = p;
                rc.simulation.tau = run_tau;
                SimulationResult res = run_experiment(rc, exp);
                ParadigmSummary ps = summarize(rc.simulation, res);
                emit(res.rounds, {ps}, run_config_to_json(rc), rc.simulation.seed,
                     (std::filesystem::path(out_dir) / label).string());
                rows.push_back(summary_row(ps));
                print_row(ps);
            };

            run_one(Paradigm::PureEdge, cfg.simulation.tau, "pure_edge");
            run_one(Paradigm::PureCloud, cfg.simulation.tau, "pure_cloud");
            for (double t : sweep_taus) {
                run_one(Paradigm::CollabNoUpdate, t, "collab_tau" + fmt_tau(t));
                run_one(Paradigm::C3ekd, t, "c3ekd_tau" + fmt_tau(t));
            }

            combined["paradigms"] = rows;
            std::filesystem::create_directories(out_dir);
            std::ofstream out(std::filesystem::path(out_dir) / "summary.json",
                              std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + out_dir + "/summary.json");
            out << combined.dump(2) << "\n";
            std::printf("sweep results written to %s\n", out_dir.c_str());
            return 0;
        }

        SimulationResult res = run_experiment(cfg, exp);
        ParadigmSummary ps = summarize(cfg.simulation, res);
        emit(res.rounds, {ps}, run_config_to_json(cfg), cfg.simulation.seed, out_dir);
        print_row(ps);
        std::printf("annotation queries: %lld\n",
                    static_cast<long long>(res.total_annotation_queries));
        if (cfg.checkpoint.path) {
            save_checkpoint(*cfg.checkpoint.path, exp.edge_spec, res.final_edge_params,
                            cfg.checkpoint.format);
            std::printf("edge checkpoint written to %s\n", cfg.checkpoint.path->c_str());
        }
        std::printf("results written to %s\n", out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "c3ekd_sim: %s\n", e.what());
        return 1;
    }
}
