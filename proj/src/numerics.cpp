#include "c3ekd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace c3ekd {

ProbDist softmax(const Logits& logits) {
    if (logits.size() < 2)
        throw std::invalid_argument("softmax: need at least two logits");
    double m = logits[0];
    for (double v : logits) {
        if (!std::isfinite(v))
            throw std::invalid_argument("softmax: non-finite logit");
        m = std::max(m, v);
    }
    ProbDist out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (double& p : out) p /= sum;
    return out;
}

ProbDist tempered_softmax(const Logits& logits, double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("tempered_softmax: temperature must be positive");
    Logits scaled(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) scaled[i] = logits[i] / temperature;
    return softmax(scaled);
}

double kd_loss(const ProbDist& cloud_soft, const ProbDist& edge_soft) {
    if (cloud_soft.size() != edge_soft.size())
        throw std::invalid_argument("kd_loss: distribution sizes differ");
    double kl = 0.0;
    for (std::size_t i = 0; i < cloud_soft.size(); ++i) {
        double p = cloud_soft[i];
        if (p <= 0.0) continue;  // 0*log(0/q) = 0
        double q = std::max(edge_soft[i], kLogClamp);
        kl += p * std::log(std::max(p, kLogClamp) / q);
    }
    return kl;
}

double ce_loss(const ProbDist& edge_probs, int y_true) {
    if (y_true < 0 || static_cast<std::size_t>(y_true) >= edge_probs.size())
        throw std::invalid_argument("ce_loss: class index out of range");
    return -std::log(std::max(edge_probs[y_true], kLogClamp));
}

double combined_loss(double l_kd, double l_ce, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("combined_loss: alpha outside [0,1]");
    return alpha * l_kd + (1.0 - alpha) * l_ce;
}

Logits kd_grad_logits(const ProbDist& cloud_soft, const ProbDist& edge_soft_t,
                      double temperature) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("kd_grad_logits: temperature must be positive");
    if (cloud_soft.size() != edge_soft_t.size())
        throw std::invalid_argument("kd_grad_logits: distribution sizes differ");
    Logits g(cloud_soft.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = (edge_soft_t[i] - cloud_soft[i]) / temperature;
    return g;
}

Logits ce_grad_logits(const ProbDist& edge_probs, int y_true) {
    if (y_true < 0 || static_cast<std::size_t>(y_true) >= edge_probs.size())
        throw std::invalid_argument("ce_grad_logits: class index out of range");
    Logits g(edge_probs);
    g[y_true] -= 1.0;
    return g;
}

std::vector<double> finite_diff_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& params, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("finite_diff_gradient: h must be positive");
    std::vector<double> p = params;
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        double save = p[i];
        p[i] = save + h;
        double fp = f(p);
        p[i] = save - h;
        double fm = f(p);
        p[i] = save;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw std::runtime_error("finite_diff_gradient: non-finite objective value");
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace c3ekd
