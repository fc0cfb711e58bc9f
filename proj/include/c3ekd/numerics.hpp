#pragma once

#include <functional>
#include <vector>

namespace c3ekd {

using Logits = std::vector<double>;
using ProbDist = std::vector<double>;

// Probabilities are clamped to at least this before any log.
constexpr double kLogClamp = 1e-12;

// Max-shift softmax. Throws std::invalid_argument on non-finite input or
// fewer than two entries.
ProbDist softmax(const Logits& logits);

// softmax of logits/T. Throws std::invalid_argument if T <= 0.
ProbDist tempered_softmax(const Logits& logits, double temperature);

// KL(cloud_soft || edge_soft) with 0*log(0/q) = 0 and the edge side clamped.
double kd_loss(const ProbDist& cloud_soft, const ProbDist& edge_soft);

// -log(edge_probs[y_true]) with clamping. Throws std::invalid_argument on an
// out-of-range class index.
double ce_loss(const ProbDist& edge_probs, int y_true);

// alpha*l_kd + (1-alpha)*l_ce
double combined_loss(double l_kd, double l_ce, double alpha);

// Gradient of the distillation term with respect to the edge logits, where
// edge_soft_t = tempered_softmax(edge_logits, T): (edge_soft_t - cloud_soft)/T.
// The 1/T factor is the tempered-softmax chain rule; no extra T^2 rescaling.
Logits kd_grad_logits(const ProbDist& cloud_soft, const ProbDist& edge_soft_t,
                      double temperature);

// Gradient of cross-entropy with respect to the logits: probs - onehot(y).
Logits ce_grad_logits(const ProbDist& edge_probs, int y_true);

// Central finite differences (f(p+h*e_i) - f(p-h*e_i)) / (2h).
// Throws std::runtime_error if f produces a non-finite value.
std::vector<double> finite_diff_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& params, double h = 1e-5);

}  // namespace c3ekd
