#pragma once

#include <vector>

#include "erelifm/tensor.hpp"

namespace erelifm {

struct LossGrad {
    double loss = 0.0;
    Matrix grad;  // dLoss/dLogits, same shape as the logits
};

// Row-wise softmax, shift-invariant per row.
Matrix softmax(const Matrix& logits);

// Mean negative log-likelihood over the batch; grad = (softmax - onehot)/B.
LossGrad cross_entropy(const Matrix& logits, const std::vector<int>& labels);

// Evidential head: evidence = softplus(logits), alpha = evidence + 1,
// strength = sum(alpha).
struct EvidentialOutput {
    Matrix evidence;
    Matrix alpha;
    std::vector<double> strength;  // per row
};

EvidentialOutput evidence_from_logits(const Matrix& logits);

// Per sample: log(strength) - log(alpha_label). Batch mean, with gradient
// flowing through the softplus.
LossGrad evidential_loss(const Matrix& logits, const std::vector<int>& labels);

// Per-sample evidential losses (no gradient), used by the trajectory
// recorder.
std::vector<double> evidential_loss_per_sample(const Matrix& logits,
                                               const std::vector<int>& labels);

double softplus(double x);

}  // namespace erelifm
