#pragma once

#include <vector>

namespace erelifm {

// Two-component 1-D Gaussian mixture fit by EM. Deterministic init from
// the score extremes; no random restarts.
struct Gmm1d {
    double mean[2] = {0.0, 0.0};
    double var[2] = {1.0, 1.0};
    double weight[2] = {0.5, 0.5};
    int iterations = 0;
    bool converged = false;

    // responsibility of component k at x
    double responsibility(double x, int k) const;
};

Gmm1d fit_gmm1d(const std::vector<double>& xs, int max_iter = 200, double tol = 1e-8,
                double var_floor = 1e-12);

// Diagonal-covariance variant in k dimensions (behind the vector-score
// flag of the clustering stage).
struct GmmDiag {
    std::vector<double> mean[2];
    std::vector<double> var[2];
    double weight[2] = {0.5, 0.5};
    int iterations = 0;
    bool converged = false;

    double log_density(const std::vector<double>& x, int k) const;
    double responsibility(const std::vector<double>& x, int k) const;
};

GmmDiag fit_gmm_diag(const std::vector<std::vector<double>>& xs, int max_iter = 200,
                     double tol = 1e-8, double var_floor = 1e-12);

}  // namespace erelifm
