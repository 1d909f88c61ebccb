#include "erelifm/finch.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace erelifm {

namespace {
double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};
}  // namespace

std::vector<size_t> first_neighbors(const std::vector<std::vector<double>>& points) {
    const size_t n = points.size();
    std::vector<size_t> nn(n, 0);
    for (size_t i = 0; i < n; ++i) {
        size_t best = i == 0 ? 1 : 0;
        double best_d = sq_dist(points[i], points[best]);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = sq_dist(points[i], points[j]);
            if (d < best_d) {
                best = j;
                best_d = d;
            }
        }
        nn[i] = best;
    }
    return nn;
}

std::vector<std::vector<size_t>> finch_first_partition(
    const std::vector<std::vector<double>>& points) {
    const size_t n = points.size();
    if (n == 0) throw std::invalid_argument("finch needs at least one point");
    if (n == 1) return {{0}};

    auto nn = first_neighbors(points);
    UnionFind uf(n);
    for (size_t i = 0; i < n; ++i) {
        uf.unite(i, nn[i]);  // covers j = nn(i), i = nn(j), and nn(i) = nn(j)
    }

    std::vector<std::vector<size_t>> parts;
    std::vector<long> root_to_part(n, -1);
    for (size_t i = 0; i < n; ++i) {
        size_t r = uf.find(i);
        if (root_to_part[r] < 0) {
            root_to_part[r] = static_cast<long>(parts.size());
            parts.emplace_back();
        }
        parts[static_cast<size_t>(root_to_part[r])].push_back(i);
    }
    return parts;
}

}  // namespace erelifm
