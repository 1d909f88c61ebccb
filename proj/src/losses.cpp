#include "erelifm/losses.hpp"

#include <algorithm>
#include <cmath>

namespace erelifm {

double softplus(double x) {
    // stable for large |x|
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

Matrix softmax(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (size_t r = 0; r < logits.rows; ++r) {
        const double* in = logits.row(r);
        double* o = out.row(r);
        double mx = in[0];
        for (size_t c = 1; c < logits.cols; ++c) mx = std::max(mx, in[c]);
        double sum = 0.0;
        for (size_t c = 0; c < logits.cols; ++c) {
            o[c] = std::exp(in[c] - mx);
            sum += o[c];
        }
        for (size_t c = 0; c < logits.cols; ++c) o[c] /= sum;
    }
    return out;
}

LossGrad cross_entropy(const Matrix& logits, const std::vector<int>& labels) {
    require(labels.size() == logits.rows, "one label per batch row required");
    const size_t cls = logits.cols;
    for (int y : labels)
        require(y >= 0 && static_cast<size_t>(y) < cls, "label out of range");

    LossGrad out;
    out.grad = softmax(logits);
    const double inv_b = 1.0 / static_cast<double>(logits.rows);
    double total = 0.0;
    for (size_t r = 0; r < logits.rows; ++r) {
        double p = out.grad(r, static_cast<size_t>(labels[r]));
        total -= std::log(std::max(p, 1e-300));
        out.grad(r, static_cast<size_t>(labels[r])) -= 1.0;
    }
    for (auto& v : out.grad.data) v *= inv_b;
    out.loss = total * inv_b;
    return out;
}

EvidentialOutput evidence_from_logits(const Matrix& logits) {
    EvidentialOutput out;
    out.evidence = Matrix(logits.rows, logits.cols);
    out.alpha = Matrix(logits.rows, logits.cols);
    out.strength.resize(logits.rows);
    for (size_t r = 0; r < logits.rows; ++r) {
        double s = 0.0;
        for (size_t c = 0; c < logits.cols; ++c) {
            double e = softplus(logits(r, c));
            out.evidence(r, c) = e;
            out.alpha(r, c) = e + 1.0;
            s += e + 1.0;
        }
        out.strength[r] = s;
    }
    return out;
}

LossGrad evidential_loss(const Matrix& logits, const std::vector<int>& labels) {
    require(labels.size() == logits.rows, "one label per batch row required");
    for (int y : labels)
        require(y >= 0 && static_cast<size_t>(y) < logits.cols, "label out of range");

    EvidentialOutput ev = evidence_from_logits(logits);
    LossGrad out;
    out.grad = Matrix(logits.rows, logits.cols);
    const double inv_b = 1.0 / static_cast<double>(logits.rows);
    double total = 0.0;
    for (size_t r = 0; r < logits.rows; ++r) {
        const size_t y = static_cast<size_t>(labels[r]);
        total += std::log(ev.strength[r]) - std::log(ev.alpha(r, y));
        for (size_t c = 0; c < logits.cols; ++c) {
            double de = 1.0 / ev.strength[r] - (c == y ? 1.0 / ev.alpha(r, y) : 0.0);
            // softplus'(x) = sigmoid(x)
            double sig = 1.0 / (1.0 + std::exp(-logits(r, c)));
            out.grad(r, c) = de * sig * inv_b;
        }
    }
    out.loss = total * inv_b;
    return out;
}

std::vector<double> evidential_loss_per_sample(const Matrix& logits,
                                               const std::vector<int>& labels) {
    require(labels.size() == logits.rows, "one label per batch row required");
    EvidentialOutput ev = evidence_from_logits(logits);
    std::vector<double> out(logits.rows);
    for (size_t r = 0; r < logits.rows; ++r) {
        const size_t y = static_cast<size_t>(labels[r]);
        out[r] = std::log(ev.strength[r]) - std::log(ev.alpha(r, y));
    }
    return out;
}

}  // namespace erelifm
