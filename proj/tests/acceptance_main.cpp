// Acceptance gate for the C3EKD simulator. Each criterion prints one line;
// the process exits 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "c3ekd/config.hpp"
#include "c3ekd/confidence_gate.hpp"
#include "c3ekd/metrics_report.hpp"
#include "c3ekd/network_model.hpp"
#include "c3ekd/numerics.hpp"
#include "c3ekd/protocol.hpp"
#include "c3ekd/rng.hpp"

using namespace c3ekd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Checker {
    int total = 0;
    int failed = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (!ok) {
            ++failed;
            if (first_failure.empty()) first_failure = what;
        }
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: got %.17g, want %.17g (tol %g)", what.c_str(),
                      got, want, tol);
        expect(std::abs(got - want) <= tol, buf);
    }
};

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

bool report(int index, const std::string& name, bool pass, double secs,
            const std::string& detail) {
    std::printf("criterion %d (%s): %s [%.2f s]%s%s\n", index, name.c_str(),
                pass ? "PASS" : "FAIL", secs, detail.empty() ? "" : " ",
                detail.c_str());
    std::fflush(stdout);
    return pass;
}

// ---------------------------------------------------------------------------
// criterion 1: pinned examples for the closed-form equations

bool criterion1() {
    auto t0 = Clock::now();
    Checker c;
    const double tol = 1e-6;  // default tolerance; sharper where values are exact

    // softmax
    ProbDist p = softmax({1.0, 0.0});
    c.expect_near(p[0], 0.7310585786300049, 1e-12, "softmax(1,0)[0]");
    c.expect_near(p[1], 0.2689414213699951, 1e-12, "softmax(1,0)[1]");
    c.expect_near(p[0] + p[1], 1.0, 1e-12, "softmax sums to 1");
    ProbDist shifted = softmax({1001.0, 1000.0});
    c.expect_near(shifted[0], p[0], 1e-9, "softmax shift invariance");
    ProbDist tp = tempered_softmax({2.0, 0.0}, 2.0);
    c.expect_near(tp[0], p[0], 1e-12, "tempered softmax halves the gap");
    ProbDist flat = tempered_softmax({3.0, -1.0}, 1e6);
    c.expect_near(flat[0], 0.5, 1e-5, "high temperature flattens");

    // distillation and cross-entropy losses
    c.expect_near(kd_loss({0.3, 0.7}, {0.3, 0.7}), 0.0, 1e-12, "KL(p||p) = 0");
    c.expect_near(kd_loss({1.0, 0.0}, {0.5, 0.5}), 0.6931471805599453, 1e-12,
                  "KL((1,0)||(.5,.5)) = ln 2");
    c.expect_near(kd_loss({0.9, 0.1}, {0.5, 0.5}),
                  0.9 * std::log(0.9 / 0.5) + 0.1 * std::log(0.1 / 0.5), 1e-12,
                  "KL definitional example");
    c.expect(kd_loss({0.8, 0.2}, {0.4, 0.6}) > 0.0, "KL positive off-diagonal");
    c.expect_near(ce_loss({0.5, 0.5}, 0), 0.6931471805599453, 1e-12, "CE(.5,.5;0) = ln 2");
    c.expect_near(ce_loss({0.2, 0.8}, 1), -std::log(0.8), 1e-12, "CE(.2,.8;1)");
    c.expect_near(ce_loss({1.0, 0.0}, 0), 0.0, tol, "CE of a certain correct prediction");
    double kd = kd_loss({0.7, 0.3}, {0.55, 0.45});
    double ce = ce_loss({0.6, 0.4}, 0);
    c.expect_near(combined_loss(kd, ce, 1.0), kd, 1e-12, "alpha = 1 keeps only KD");
    c.expect_near(combined_loss(kd, ce, 0.0), ce, 1e-12, "alpha = 0 keeps only CE");
    c.expect_near(combined_loss(kd, ce, 0.5), 0.5 * kd + 0.5 * ce, 1e-12, "alpha midpoint");

    // confidence and gate
    c.expect_near(confidence({0.7, 0.3}), 0.4, 1e-12, "confidence(.7,.3)");
    c.expect_near(confidence({0.5, 0.5}), 0.0, 1e-12, "confidence at the tie");
    c.expect_near(confidence({0.975, 0.025}), 0.95, 1e-12, "confidence(.975,.025)");
    c.expect(gate(0.2, 0.2).outcome == GateOutcome::AcceptLocal, "boundary accepts locally");
    c.expect(gate(0.19999, 0.2).outcome == GateOutcome::UploadToCloud, "below tau uploads");
    c.expect(gate(1.0, 0.0).outcome == GateOutcome::AcceptLocal, "tau = 0 accepts everything");

    // transmission delays (240 kb image; 5 Mbps and 20 Mbps links)
    LinkConfig link;
    c.expect_near(transmission_delay(240000.0, 5e6), 0.048, 1e-15, "camera-to-edge delay");
    c.expect_near(transmission_delay(240000.0, 2e7), 0.012, 1e-15, "edge-to-cloud delay");
    c.expect_near(sample_delay(false, link), 0.048, 1e-15, "kept-local delay");
    c.expect_near(sample_delay(true, link), 0.060, 1e-15, "uploaded delay");
    DelayLedger ledger;
    ledger.add(0.048);
    ledger.add(0.060);
    c.expect_near(average_delay(ledger), 0.054, 1e-15, "two-sample average");

    double secs = seconds_since(t0);
    bool pass = c.failed == 0 && secs < 1.0;
    std::string detail = std::to_string(c.total) + " checks";
    if (c.failed > 0) detail += ", first failure: " + c.first_failure;
    if (secs >= 1.0) detail += " (over the 1 s budget)";
    return report(1, "equation unit suite", pass, secs, detail);
}

// ---------------------------------------------------------------------------
// criterion 2: analytic gradients against central finite differences

bool criterion2() {
    auto t0 = Clock::now();
    Rng rng(777);
    double worst = 0.0;
    int instances = 0;
    bool pass = true;

    for (LossKind kind : {LossKind::KdOnly, LossKind::CeOnly, LossKind::Combined}) {
        for (int trial = 0; trial < 50; ++trial) {
            ClassifierSpec spec;
            bool mlp = trial % 2 == 1;
            spec.kind = mlp ? ModelKind::Mlp : ModelKind::LinearSoftmax;
            spec.input_dim = 2 + static_cast<int>(rng.index(3));
            spec.hidden_dim = mlp ? 2 + static_cast<int>(rng.index(4)) : 0;
            spec.activation = rng.index(2) ? Activation::Tanh : Activation::Relu;

            ClassifierParams params;
            params.flat.resize(spec.param_count());
            for (double& v : params.flat) v = rng.uniform(-1.0, 1.0);

            int batch_n = 1 + static_cast<int>(rng.index(4));
            std::vector<Sample> samples(batch_n);
            std::vector<SampleLossSpec> batch(batch_n);
            for (int i = 0; i < batch_n; ++i) {
                samples[i].id = i;
                samples[i].features.resize(spec.input_dim);
                for (double& v : samples[i].features) v = rng.uniform(-2.0, 2.0);
                samples[i].label = rng.index(2) ? 1 : 0;
                SampleLossSpec& ls = batch[i];
                ls.sample = &samples[i];
                ls.kind = kind;
                ls.temperature = rng.uniform(0.5, 4.0);
                ls.alpha = rng.uniform(0.0, 1.0);
                double cp = rng.uniform(0.05, 0.95);
                ls.cloud_soft = {cp, 1.0 - cp};
                ls.y_true = samples[i].label;
                ls.weight = rng.uniform(0.1, 2.0);
            }

            auto analytic = loss_gradient(spec, params, batch);
            auto numeric = finite_diff_gradient(
                [&](const std::vector<double>& flat) {
                    ClassifierParams q;
                    q.flat = flat;
                    double num = 0.0, den = 0.0;
                    for (const SampleLossSpec& ls : batch) {
                        num += ls.weight * sample_loss(ls, infer_logits(spec, q, ls.sample->features));
                        den += ls.weight;
                    }
                    return num / den;
                },
                params.flat);

            double scale = 1.0;
            for (double v : numeric) scale = std::max(scale, std::abs(v));
            for (std::size_t i = 0; i < analytic.size(); ++i) {
                double rel = std::abs(analytic[i] - numeric[i]) / scale;
                worst = std::max(worst, rel);
                if (rel >= 1e-4) pass = false;
            }
            ++instances;
        }
    }

    double secs = seconds_since(t0);
    pass = pass && secs < 10.0;
    std::string detail = "max rel err " + fmt("%.2e", worst) + " over " +
                         std::to_string(instances) + " instances";
    return report(2, "gradient oracle", pass, secs, detail);
}

// ---------------------------------------------------------------------------
// criteria 3-6 share one 5-seed sweep over the default configuration

struct RunStats {
    double final_acc = 0.0;
    double final20_acc = 0.0;
    double upload_prop = 0.0;
    double delay_s = 0.0;
    double delay_residual = 0.0;  // |measured - affine law|
    std::vector<double> racc;     // per round
};

RunStats collect(const RunConfig& cfg, const Experiment& exp) {
    SimulationResult res = run_experiment(cfg, exp);
    RunStats st;
    st.final_acc = res.final_framework_accuracy;
    const int r = static_cast<int>(res.rounds.size());
    for (int i = r - 20; i < r; ++i) st.final20_acc += res.rounds[i].framework_accuracy;
    st.final20_acc /= 20.0;
    st.upload_prop = res.cumulative_upload_proportion;
    st.delay_s = res.overall_avg_delay_s;
    const LinkConfig& link = cfg.link;
    double law = link.image_size_bits / link.bw_local_to_edge_bps +
                 (link.image_size_bits / link.bw_edge_to_cloud_bps) * st.upload_prop;
    st.delay_residual = std::abs(st.delay_s - law);
    for (const RoundReport& rep : res.rounds) st.racc.push_back(rep.relative_accuracy);
    return st;
}

double lsq_slope(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    double xbar = (n + 1) / 2.0, ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        double dx = (i + 1) - xbar;
        num += dx * (y[i] - ybar);
        den += dx * dx;
    }
    return num / den;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

struct Sweep {
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<double> taus = {0.1, 0.2, 0.3};
    // per seed
    std::vector<RunStats> pure_edge, pure_cloud;
    std::map<double, std::vector<RunStats>> collab, c3ekd;
    double secs = 0.0;
};

Sweep run_sweep() {
    auto t0 = Clock::now();
    Sweep sw;
    for (std::uint64_t seed : sw.seeds) {
        RunConfig cfg;
        cfg.simulation.seed = seed;
        Experiment exp = prepare_experiment(cfg);

        cfg.simulation.paradigm = Paradigm::PureEdge;
        sw.pure_edge.push_back(collect(cfg, exp));
        cfg.simulation.paradigm = Paradigm::PureCloud;
        sw.pure_cloud.push_back(collect(cfg, exp));
        for (double tau : sw.taus) {
            cfg.simulation.tau = tau;
            cfg.simulation.paradigm = Paradigm::CollabNoUpdate;
            sw.collab[tau].push_back(collect(cfg, exp));
            cfg.simulation.paradigm = Paradigm::C3ekd;
            sw.c3ekd[tau].push_back(collect(cfg, exp));
        }
    }
    sw.secs = seconds_since(t0);
    return sw;
}

template <class F>
double seed_mean(const std::vector<RunStats>& runs, F field) {
    std::vector<double> v;
    for (const RunStats& r : runs) v.push_back(field(r));
    return mean(v);
}

bool criterion3(const Sweep& sw) {
    double pe = seed_mean(sw.pure_edge, [](const RunStats& r) { return r.final_acc; });
    double pc = seed_mean(sw.pure_cloud, [](const RunStats& r) { return r.final_acc; });
    double co = seed_mean(sw.collab.at(0.2), [](const RunStats& r) { return r.final_acc; });
    double c3 = seed_mean(sw.c3ekd.at(0.2), [](const RunStats& r) { return r.final_acc; });

    bool ordering = pe < co && co < c3 && c3 <= pc + 0.01;

    bool monotone = true;
    std::string ups_detail;
    for (const auto* fam : {&sw.collab, &sw.c3ekd}) {
        double prev = -1.0;
        std::string part;
        for (double tau : sw.taus) {
            double u = seed_mean(fam->at(tau), [](const RunStats& r) { return r.upload_prop; });
            if (u <= prev) monotone = false;
            prev = u;
            part += (part.empty() ? "" : "/") + fmt("%.3f", u);
        }
        ups_detail += (fam == &sw.collab ? " collab ups " : "; c3ekd ups ") + part;
    }

    bool pass = ordering && monotone && sw.secs < 120.0;
    std::string detail = "acc pe=" + fmt("%.4f", pe) + " collab=" + fmt("%.4f", co) +
                         " c3ekd=" + fmt("%.4f", c3) + " cloud=" + fmt("%.4f", pc) + ";" +
                         ups_detail;
    if (sw.secs >= 120.0) detail += " (sweep over the 2 min budget)";
    return report(3, "paradigm ordering and upload monotonicity", pass, sw.secs, detail);
}

bool criterion4(const Sweep& sw) {
    auto t0 = Clock::now();
    double co = seed_mean(sw.collab.at(0.2), [](const RunStats& r) { return r.final20_acc; });
    double c3 = seed_mean(sw.c3ekd.at(0.2), [](const RunStats& r) { return r.final20_acc; });
    double diff = c3 - co;
    bool pass = diff >= 0.02;
    std::string detail = "last-20-round gain " + fmt("%.4f", diff) + " (c3ekd " +
                         fmt("%.4f", c3) + " vs collab " + fmt("%.4f", co) + ")";
    return report(4, "knowledge updates lift late-round accuracy by >= 2 points", pass,
                  seconds_since(t0), detail);
}

bool criterion5(const Sweep& sw) {
    auto t0 = Clock::now();
    bool pass = true;
    std::string slopes;
    for (double tau : sw.taus) {
        std::vector<double> per_seed;
        for (const RunStats& r : sw.c3ekd.at(tau)) per_seed.push_back(lsq_slope(r.racc));
        double s = mean(per_seed);
        if (s <= 0.0) pass = false;
        slopes += (slopes.empty() ? "" : "/") + fmt("%.2e", s);
    }
    std::vector<double> final5;
    for (const RunStats& r : sw.c3ekd.at(0.3)) {
        double s = 0.0;
        for (std::size_t i = r.racc.size() - 5; i < r.racc.size(); ++i) s += r.racc[i];
        final5.push_back(s / 5.0);
    }
    double f5 = mean(final5);
    if (f5 < 0.95) pass = false;
    std::string detail = "rAcc slopes " + slopes + "; final-5 rAcc at tau=0.3: " + fmt("%.4f", f5);
    return report(5, "relative accuracy recovers", pass, seconds_since(t0), detail);
}

bool criterion6(const Sweep& sw) {
    auto t0 = Clock::now();
    double co = seed_mean(sw.collab.at(0.2), [](const RunStats& r) { return r.upload_prop; });
    double c3 = seed_mean(sw.c3ekd.at(0.2), [](const RunStats& r) { return r.upload_prop; });
    double reduction = (co - c3) / co;
    bool pass = reduction >= 0.10;
    std::string detail = "upload reduction at tau=0.2: " + fmt("%.1f", reduction * 100.0) +
                         "% (c3ekd " + fmt("%.3f", c3) + " vs collab " + fmt("%.3f", co) + ")";
    return report(6, "updates cut cumulative uploads by >= 10%", pass, seconds_since(t0),
                  detail);
}

bool criterion7(const Sweep& sw) {
    auto t0 = Clock::now();
    double worst = 0.0;
    auto scan = [&](const std::vector<RunStats>& runs) {
        for (const RunStats& r : runs) worst = std::max(worst, r.delay_residual);
    };
    scan(sw.pure_edge);
    scan(sw.pure_cloud);
    for (double tau : sw.taus) {
        scan(sw.collab.at(tau));
        scan(sw.c3ekd.at(tau));
    }
    bool law_ok = worst <= 1e-12;

    double pe = seed_mean(sw.pure_edge, [](const RunStats& r) { return r.delay_s; });
    double pc = seed_mean(sw.pure_cloud, [](const RunStats& r) { return r.delay_s; });
    double gap_ms = (pc - pe) * 1000.0;
    bool gap_ok = std::abs(gap_ms - 12.0) <= 1e-9;

    bool pass = law_ok && gap_ok;
    std::string detail = "max law residual " + fmt("%.2e", worst) + " s; cloud-edge gap " +
                         fmt("%.3f", gap_ms) + " ms";
    return report(7, "delay model matches the closed form", pass, seconds_since(t0), detail);
}

// ---------------------------------------------------------------------------
// criterion 8: end-to-end byte determinism

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion8() {
    auto t0 = Clock::now();
    auto emit_once = [](const std::filesystem::path& dir) {
        RunConfig cfg;  // defaults: C3EKD, tau 0.2, seed 1
        Experiment exp = prepare_experiment(cfg);
        SimulationResult res = run_experiment(cfg, exp);
        ParadigmSummary ps = summarize(cfg.simulation, res);
        emit(res.rounds, {ps}, run_config_to_json(cfg), cfg.simulation.seed, dir.string());
    };
    auto base = std::filesystem::temp_directory_path();
    auto dir_a = base / "c3ekd_accept_rerun_a";
    auto dir_b = base / "c3ekd_accept_rerun_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    emit_once(dir_a);
    emit_once(dir_b);

    bool pass = true;
    for (const char* name : {"rounds.csv", "summary.json", "racc_trace.csv"})
        if (slurp(dir_a / name) != slurp(dir_b / name)) pass = false;
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    return report(8, "identical configs produce byte-identical outputs", pass,
                  seconds_since(t0), pass ? "rounds.csv, summary.json, racc_trace.csv match"
                                          : "outputs differ between reruns");
}

}  // namespace

int main() {
    int passed = 0;
    passed += criterion1();
    passed += criterion2();
    Sweep sw = run_sweep();
    passed += criterion3(sw);
    passed += criterion4(sw);
    passed += criterion5(sw);
    passed += criterion6(sw);
    passed += criterion7(sw);
    passed += criterion8();
    std::printf("acceptance: %d/8 criteria passed\n", passed);
    return passed == 8 ? 0 : 1;
}
