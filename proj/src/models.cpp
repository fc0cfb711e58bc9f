#include "c3ekd/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "c3ekd/rng.hpp"

namespace c3ekd {

namespace {

double activate(Activation a, double z) {
    return a == Activation::Relu ? std::max(z, 0.0) : std::tanh(z);
}

double activate_grad(Activation a, double z) {
    if (a == Activation::Relu) return z > 0.0 ? 1.0 : 0.0;
    double t = std::tanh(z);
    return 1.0 - t * t;
}

void check_dims(const ClassifierSpec& spec, const ClassifierParams& params,
                const std::vector<double>& features) {
    if (static_cast<int>(features.size()) != spec.input_dim)
        throw std::invalid_argument("infer_logits: feature dimension mismatch");
    if (static_cast<int>(params.flat.size()) != spec.param_count())
        throw std::invalid_argument("infer_logits: parameter count mismatch");
}

// Gradient of one sample's loss with respect to the edge logits, plus the
// loss value itself. CE acts on T=1 probabilities; the distillation term acts
// on tempered probabilities with the 1/T chain factor.
std::pair<double, Logits> loss_and_logit_grad(const SampleLossSpec& ls,
                                              const Logits& z) {
    double t2 = ls.kd_t_squared ? ls.temperature * ls.temperature : 1.0;
    switch (ls.kind) {
        case LossKind::KdOnly: {
            ProbDist edge_t = tempered_softmax(z, ls.temperature);
            double l = t2 * kd_loss(ls.cloud_soft, edge_t);
            Logits g = kd_grad_logits(ls.cloud_soft, edge_t, ls.temperature);
            for (double& v : g) v *= t2;
            return {l, g};
        }
        case LossKind::CeOnly: {
            ProbDist p = softmax(z);
            return {ce_loss(p, ls.y_true), ce_grad_logits(p, ls.y_true)};
        }
        case LossKind::Combined: {
            ProbDist edge_t = tempered_softmax(z, ls.temperature);
            ProbDist p1 = softmax(z);
            double l = combined_loss(t2 * kd_loss(ls.cloud_soft, edge_t),
                                     ce_loss(p1, ls.y_true), ls.alpha);
            Logits gk = kd_grad_logits(ls.cloud_soft, edge_t, ls.temperature);
            Logits gc = ce_grad_logits(p1, ls.y_true);
            Logits g(gk.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                g[i] = ls.alpha * t2 * gk[i] + (1.0 - ls.alpha) * gc[i];
            return {l, g};
        }
    }
    throw std::logic_error("loss_and_logit_grad: unknown loss kind");
}

}  // namespace

int ClassifierSpec::param_count() const {
    if (kind == ModelKind::LinearSoftmax) return 2 * input_dim + 2;
    return hidden_dim * input_dim + hidden_dim + 2 * hidden_dim + 2;
}

Logits infer_logits(const ClassifierSpec& spec, const ClassifierParams& params,
                    const std::vector<double>& features) {
    check_dims(spec, params, features);
    const int d = spec.input_dim;
    const double* f = params.flat.data();
    if (spec.kind == ModelKind::LinearSoftmax) {
        Logits z(2);
        for (int r = 0; r < 2; ++r) {
            double acc = f[2 * d + r];  // bias
            for (int c = 0; c < d; ++c) acc += f[r * d + c] * features[c];
            z[r] = acc;
        }
        return z;
    }
    const int h = spec.hidden_dim;
    const double* w1 = f;
    const double* b1 = f + h * d;
    const double* w2 = b1 + h;
    const double* b2 = w2 + 2 * h;
    std::vector<double> a(h);
    for (int r = 0; r < h; ++r) {
        double acc = b1[r];
        for (int c = 0; c < d; ++c) acc += w1[r * d + c] * features[c];
        a[r] = activate(spec.activation, acc);
    }
    Logits z(2);
    for (int r = 0; r < 2; ++r) {
        double acc = b2[r];
        for (int c = 0; c < h; ++c) acc += w2[r * h + c] * a[c];
        z[r] = acc;
    }
    return z;
}

std::pair<int, ProbDist> predict(const ClassifierSpec& spec,
                                 const ClassifierParams& params,
                                 const std::vector<double>& features) {
    ProbDist p = softmax(infer_logits(spec, params, features));
    int cls = p[1] > p[0] ? 1 : 0;  // tie goes to class 0
    return {cls, p};
}

double sample_loss(const SampleLossSpec& ls, const Logits& edge_logits) {
    return loss_and_logit_grad(ls, edge_logits).first;
}

std::vector<double> loss_gradient(const ClassifierSpec& spec,
                                  const ClassifierParams& params,
                                  const std::vector<SampleLossSpec>& batch) {
    if (batch.empty())
        throw std::invalid_argument("loss_gradient: empty batch");
    const int d = spec.input_dim;
    std::vector<double> grad(spec.param_count(), 0.0);
    double weight_sum = 0.0;
    for (const SampleLossSpec& ls : batch) weight_sum += ls.weight;
    if (weight_sum <= 0.0)
        throw std::invalid_argument("loss_gradient: nonpositive total weight");

    for (const SampleLossSpec& ls : batch) {
        const std::vector<double>& x = ls.sample->features;
        Logits z = infer_logits(spec, params, x);
        Logits dz = loss_and_logit_grad(ls, z).second;
        double w = ls.weight / weight_sum;
        if (spec.kind == ModelKind::LinearSoftmax) {
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < d; ++c) grad[r * d + c] += w * dz[r] * x[c];
                grad[2 * d + r] += w * dz[r];
            }
            continue;
        }
        // MLP backprop
        const int h = spec.hidden_dim;
        const double* f = params.flat.data();
        const double* w1 = f;
        const double* b1 = f + h * d;
        const double* w2 = b1 + h;
        std::vector<double> z1(h), a1(h);
        for (int r = 0; r < h; ++r) {
            double acc = b1[r];
            for (int c = 0; c < d; ++c) acc += w1[r * d + c] * x[c];
            z1[r] = acc;
            a1[r] = activate(spec.activation, acc);
        }
        double* gw1 = grad.data();
        double* gb1 = grad.data() + h * d;
        double* gw2 = gb1 + h;
        double* gb2 = gw2 + 2 * h;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < h; ++c) gw2[r * h + c] += w * dz[r] * a1[c];
            gb2[r] += w * dz[r];
        }
        for (int c = 0; c < h; ++c) {
            double da = w2[0 * h + c] * dz[0] + w2[1 * h + c] * dz[1];
            double dzh = da * activate_grad(spec.activation, z1[c]);
            for (int k = 0; k < d; ++k) gw1[c * d + k] += w * dzh * x[k];
            gb1[c] += w * dzh;
        }
    }
    return grad;
}

ClassifierParams init_params(const ClassifierSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    ClassifierParams p;
    p.flat.resize(spec.param_count());
    for (double& v : p.flat) v = rng.uniform(-0.1, 0.1);
    p.version = 0;
    return p;
}

ClassifierParams train_initial(const ClassifierSpec& spec,
                               const std::vector<Sample>& train_set, int epochs,
                               double lr, std::uint64_t seed) {
    if (train_set.empty())
        throw std::invalid_argument("train_initial: empty training set");
    ClassifierParams params = init_params(spec, seed);
    std::vector<SampleLossSpec> batch(train_set.size());
    for (std::size_t i = 0; i < train_set.size(); ++i) {
        batch[i].sample = &train_set[i];
        batch[i].kind = LossKind::CeOnly;
        batch[i].y_true = train_set[i].label;
    }
    for (int e = 0; e < epochs; ++e) {
        std::vector<double> grad = loss_gradient(spec, params, batch);
        double check = 0.0;
        for (double g : grad) check += g;
        if (!std::isfinite(check))
            throw std::runtime_error("train_initial: training diverged (non-finite gradient)");
        for (std::size_t i = 0; i < params.flat.size(); ++i)
            params.flat[i] -= lr * grad[i];
    }
    params.version = 0;
    return params;
}

ClassifierParams apply_update(const ClassifierParams& params,
                              const std::vector<double>& gradient, double eta) {
    if (gradient.size() != params.flat.size())
        throw std::invalid_argument("apply_update: gradient length mismatch");
    if (eta < 0.0)
        throw std::invalid_argument("apply_update: eta must be nonnegative");
    ClassifierParams out = params;
    for (std::size_t i = 0; i < out.flat.size(); ++i)
        out.flat[i] -= eta * gradient[i];
    out.version = params.version + 1;
    return out;
}

namespace {

const char* kind_name(ModelKind k) {
    return k == ModelKind::LinearSoftmax ? "linear-softmax" : "mlp";
}

const char* activation_name(Activation a) {
    return a == Activation::Relu ? "relu" : "tanh";
}

ModelKind kind_from_name(const std::string& s) {
    if (s == "linear-softmax") return ModelKind::LinearSoftmax;
    if (s == "mlp") return ModelKind::Mlp;
    throw std::runtime_error("checkpoint: unknown model kind '" + s + "'");
}

Activation activation_from_name(const std::string& s) {
    if (s == "relu") return Activation::Relu;
    if (s == "tanh") return Activation::Tanh;
    throw std::runtime_error("checkpoint: unknown activation '" + s + "'");
}

constexpr char kBinaryMagic[4] = {'C', '3', 'K', 'D'};

template <class T>
void write_le(std::ofstream& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <class T>
T read_le(std::ifstream& in) {
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ClassifierSpec& spec,
                     const ClassifierParams& params, CheckpointFormat format) {
    if (format == CheckpointFormat::Json) {
        nlohmann::json j;
        j["kind"] = kind_name(spec.kind);
        j["input_dim"] = spec.input_dim;
        j["hidden_dim"] = spec.hidden_dim;
        j["activation"] = activation_name(spec.activation);
        j["version"] = params.version;
        j["flat"] = params.flat;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out.write(kBinaryMagic, 4);
    write_le<std::uint8_t>(out, 1);  // format version
    write_le<std::uint8_t>(out, spec.kind == ModelKind::Mlp ? 1 : 0);
    write_le<std::uint8_t>(out, spec.activation == Activation::Tanh ? 1 : 0);
    write_le<std::int32_t>(out, spec.input_dim);
    write_le<std::int32_t>(out, spec.hidden_dim);
    write_le<std::int64_t>(out, params.version);
    write_le<std::int64_t>(out, static_cast<std::int64_t>(params.flat.size()));
    for (double v : params.flat) write_le<double>(out, v);
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

std::pair<ClassifierSpec, ClassifierParams> load_checkpoint(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[4] = {};
    probe.read(magic, 4);
    probe.close();

    ClassifierSpec spec;
    ClassifierParams params;
    if (std::memcmp(magic, kBinaryMagic, 4) == 0) {
        std::ifstream in(path, std::ios::binary);
        in.seekg(4);
        auto fmt = read_le<std::uint8_t>(in);
        if (fmt != 1) throw std::runtime_error("load_checkpoint: unsupported format version");
        spec.kind = read_le<std::uint8_t>(in) ? ModelKind::Mlp : ModelKind::LinearSoftmax;
        spec.activation = read_le<std::uint8_t>(in) ? Activation::Tanh : Activation::Relu;
        spec.input_dim = read_le<std::int32_t>(in);
        spec.hidden_dim = read_le<std::int32_t>(in);
        params.version = read_le<std::int64_t>(in);
        auto count = read_le<std::int64_t>(in);
        if (!in || count < 0 || count != spec.param_count())
            throw std::runtime_error("load_checkpoint: corrupt header in " + path);
        params.flat.resize(static_cast<std::size_t>(count));
        for (double& v : params.flat) v = read_le<double>(in);
        if (!in) throw std::runtime_error("load_checkpoint: truncated file " + path);
        return {spec, params};
    }
    std::ifstream in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_checkpoint: bad JSON in " + path + ": " + e.what());
    }
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    spec.input_dim = j.at("input_dim").get<int>();
    spec.hidden_dim = j.at("hidden_dim").get<int>();
    spec.activation = activation_from_name(j.at("activation").get<std::string>());
    params.version = j.at("version").get<long long>();
    params.flat = j.at("flat").get<std::vector<double>>();
    if (static_cast<int>(params.flat.size()) != spec.param_count())
        throw std::runtime_error("load_checkpoint: parameter count mismatch in " + path);
    return {spec, params};
}

}  // namespace c3ekd
