#include "erelifm/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace erelifm {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

double log_gauss(double x, double mean, double var) {
    double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}
}  // namespace

double Gmm1d::responsibility(double x, int k) const {
    double l0 = std::log(weight[0]) + log_gauss(x, mean[0], var[0]);
    double l1 = std::log(weight[1]) + log_gauss(x, mean[1], var[1]);
    double mx = std::max(l0, l1);
    double z = std::exp(l0 - mx) + std::exp(l1 - mx);
    return std::exp((k == 0 ? l0 : l1) - mx) / z;
}

Gmm1d fit_gmm1d(const std::vector<double>& xs, int max_iter, double tol, double var_floor) {
    if (xs.size() < 2) throw std::invalid_argument("gmm fit needs at least 2 points");
    const double n = static_cast<double>(xs.size());

    Gmm1d g;
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double mean_all = 0.0;
    for (double x : xs) mean_all += x;
    mean_all /= n;
    double var_all = 0.0;
    for (double x : xs) var_all += (x - mean_all) * (x - mean_all);
    var_all = std::max(var_all / n, var_floor);

    g.mean[0] = *mn;
    g.mean[1] = *mx;
    g.var[0] = g.var[1] = var_all;
    g.weight[0] = g.weight[1] = 0.5;

    double prev_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> r0(xs.size());
    for (int it = 0; it < max_iter; ++it) {
        // E step
        double ll = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double l0 = std::log(g.weight[0]) + log_gauss(xs[i], g.mean[0], g.var[0]);
            double l1 = std::log(g.weight[1]) + log_gauss(xs[i], g.mean[1], g.var[1]);
            double m = std::max(l0, l1);
            double z = std::exp(l0 - m) + std::exp(l1 - m);
            r0[i] = std::exp(l0 - m) / z;
            ll += m + std::log(z);
        }
        // M step
        double n0 = 0.0, s0 = 0.0, s1 = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            n0 += r0[i];
            s0 += r0[i] * xs[i];
            s1 += (1.0 - r0[i]) * xs[i];
        }
        double n1 = n - n0;
        n0 = std::max(n0, 1e-12);
        n1 = std::max(n1, 1e-12);
        g.mean[0] = s0 / n0;
        g.mean[1] = s1 / n1;
        double v0 = 0.0, v1 = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double d0 = xs[i] - g.mean[0], d1 = xs[i] - g.mean[1];
            v0 += r0[i] * d0 * d0;
            v1 += (1.0 - r0[i]) * d1 * d1;
        }
        g.var[0] = std::max(v0 / n0, var_floor);
        g.var[1] = std::max(v1 / n1, var_floor);
        g.weight[0] = n0 / n;
        g.weight[1] = n1 / n;

        g.iterations = it + 1;
        if (std::abs(ll - prev_ll) < tol) {
            g.converged = true;
            break;
        }
        prev_ll = ll;
    }
    return g;
}

double GmmDiag::log_density(const std::vector<double>& x, int k) const {
    double ll = 0.0;
    for (size_t i = 0; i < x.size(); ++i) ll += log_gauss(x[i], mean[k][i], var[k][i]);
    return ll;
}

double GmmDiag::responsibility(const std::vector<double>& x, int k) const {
    double l0 = std::log(weight[0]) + log_density(x, 0);
    double l1 = std::log(weight[1]) + log_density(x, 1);
    double mx = std::max(l0, l1);
    double z = std::exp(l0 - mx) + std::exp(l1 - mx);
    return std::exp((k == 0 ? l0 : l1) - mx) / z;
}

GmmDiag fit_gmm_diag(const std::vector<std::vector<double>>& xs, int max_iter, double tol,
                     double var_floor) {
    if (xs.size() < 2) throw std::invalid_argument("gmm fit needs at least 2 points");
    const size_t dim = xs.front().size();
    const double n = static_cast<double>(xs.size());

    // init on the points with the lowest / highest coordinate sum
    auto coord_sum = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    };
    size_t lo = 0, hi = 0;
    for (size_t i = 1; i < xs.size(); ++i) {
        if (coord_sum(xs[i]) < coord_sum(xs[lo])) lo = i;
        if (coord_sum(xs[i]) > coord_sum(xs[hi])) hi = i;
    }

    GmmDiag g;
    g.mean[0] = xs[lo];
    g.mean[1] = xs[hi];
    std::vector<double> mean_all(dim, 0.0), var_all(dim, 0.0);
    for (const auto& x : xs)
        for (size_t i = 0; i < dim; ++i) mean_all[i] += x[i];
    for (auto& v : mean_all) v /= n;
    for (const auto& x : xs)
        for (size_t i = 0; i < dim; ++i) {
            double d = x[i] - mean_all[i];
            var_all[i] += d * d;
        }
    for (auto& v : var_all) v = std::max(v / n, var_floor);
    g.var[0] = g.var[1] = var_all;

    double prev_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> r0(xs.size());
    for (int it = 0; it < max_iter; ++it) {
        double ll = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double l0 = std::log(g.weight[0]) + g.log_density(xs[i], 0);
            double l1 = std::log(g.weight[1]) + g.log_density(xs[i], 1);
            double m = std::max(l0, l1);
            double z = std::exp(l0 - m) + std::exp(l1 - m);
            r0[i] = std::exp(l0 - m) / z;
            ll += m + std::log(z);
        }
        double n0 = 0.0;
        for (double r : r0) n0 += r;
        double n1 = std::max(n - n0, 1e-12);
        n0 = std::max(n0, 1e-12);
        for (int k = 0; k < 2; ++k) std::fill(g.mean[k].begin(), g.mean[k].end(), 0.0);
        for (size_t i = 0; i < xs.size(); ++i)
            for (size_t d = 0; d < dim; ++d) {
                g.mean[0][d] += r0[i] * xs[i][d];
                g.mean[1][d] += (1.0 - r0[i]) * xs[i][d];
            }
        for (size_t d = 0; d < dim; ++d) {
            g.mean[0][d] /= n0;
            g.mean[1][d] /= n1;
        }
        for (int k = 0; k < 2; ++k) std::fill(g.var[k].begin(), g.var[k].end(), 0.0);
        for (size_t i = 0; i < xs.size(); ++i)
            for (size_t d = 0; d < dim; ++d) {
                double d0 = xs[i][d] - g.mean[0][d], d1 = xs[i][d] - g.mean[1][d];
                g.var[0][d] += r0[i] * d0 * d0;
                g.var[1][d] += (1.0 - r0[i]) * d1 * d1;
            }
        for (size_t d = 0; d < dim; ++d) {
            g.var[0][d] = std::max(g.var[0][d] / n0, var_floor);
            g.var[1][d] = std::max(g.var[1][d] / n1, var_floor);
        }
        g.weight[0] = n0 / n;
        g.weight[1] = n1 / n;

        g.iterations = it + 1;
        if (std::abs(ll - prev_ll) < tol) {
            g.converged = true;
            break;
        }
        prev_ll = ll;
    }
    return g;
}

}  // namespace erelifm
