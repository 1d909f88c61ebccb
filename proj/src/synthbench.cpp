#include "erelifm/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "erelifm/tensor.hpp"

namespace erelifm {

namespace {
constexpr double kPi = 3.14159265358979323846;

long long round_half_away(double x) {
    return static_cast<long long>(x < 0 ? std::ceil(x - 0.5) : std::floor(x + 0.5));
}
}  // namespace

void BenchmarkSpec::validate() const {
    require(num_domains >= 3, "need at least 3 domains (so sources >= 2)");
    require(known_classes >= 2, "need at least 2 known classes");
    require(unseen_classes >= 0, "unseen class count must be non-negative");
    require(feature_dim >= 2, "feature dim must be at least 2");
    require(samples_per_cell >= 1, "need at least one sample per (domain, class)");
    require(domain_scale > 0.0, "domain transform must be invertible (scale > 0)");
    require(cluster_std >= 0.0, "cluster std must be non-negative");
}

std::vector<std::vector<double>> class_means(const BenchmarkSpec& spec) {
    Rng rng = Rng(spec.seed).split("class-means");
    std::vector<std::vector<double>> means;
    for (int c = 0; c < spec.total_classes(); ++c) {
        std::vector<double> m = rng.normal_vec(static_cast<size_t>(spec.feature_dim));
        double norm = std::sqrt(std::inner_product(m.begin(), m.end(), m.begin(), 0.0));
        if (norm < 1e-12) norm = 1.0;
        for (auto& v : m) v *= spec.mean_radius / norm;
        means.push_back(std::move(m));
    }
    return means;
}

std::vector<double> apply_domain_transform(const BenchmarkSpec& spec, int domain,
                                           const std::vector<double>& x) {
    std::vector<double> y = x;
    double angle = spec.domain_angle_deg * kPi / 180.0 * domain;
    double c = std::cos(angle), s = std::sin(angle);
    // rotate consecutive coordinate pairs
    for (size_t i = 0; i + 1 < y.size(); i += 2) {
        double a = y[i], b = y[i + 1];
        y[i] = c * a - s * b;
        y[i + 1] = s * a + c * b;
    }
    double t = spec.domain_translation * domain;
    for (auto& v : y) v = spec.domain_scale * v + t;
    return y;
}

Dataset generate(const BenchmarkSpec& spec) {
    spec.validate();
    auto means = class_means(spec);
    Dataset ds;
    ds.spec = spec;
    int id = 0;
    for (int d = 0; d < spec.num_domains; ++d) {
        for (int c = 0; c < spec.total_classes(); ++c) {
            Rng cell = Rng(spec.seed).split("cell", static_cast<uint64_t>(d) * 1000 + c);
            for (int i = 0; i < spec.samples_per_cell; ++i) {
                std::vector<double> x = means[static_cast<size_t>(c)];
                for (auto& v : x) v += spec.cluster_std * cell.normal();
                Sample smp;
                smp.id = id++;
                smp.domain_id = d;
                smp.observed_label = c;
                smp.original_label = c;
                smp.features = apply_domain_transform(spec, d, x);
                ds.samples.push_back(std::move(smp));
            }
        }
    }
    return ds;
}

void inject_symmetric_noise(std::vector<Sample>& samples, int known_classes,
                            double ratio, Rng& rng) {
    require(ratio >= 0.0 && ratio <= 1.0, "noise ratio must lie in [0, 1]");
    std::vector<size_t> idx;
    for (size_t i = 0; i < samples.size(); ++i)
        if (samples[i].original_label < known_classes) idx.push_back(i);
    rng.shuffle(idx);
    size_t n_flip = static_cast<size_t>(round_half_away(ratio * static_cast<double>(idx.size())));
    for (size_t k = 0; k < n_flip; ++k) {
        Sample& s = samples[idx[k]];
        int v = static_cast<int>(rng.below(static_cast<uint64_t>(known_classes - 1)));
        if (v >= s.original_label) ++v;
        s.observed_label = v;
    }
}

std::vector<int> similar_class_map(const std::vector<Sample>& samples, int known_classes) {
    const size_t f = samples.empty() ? 0 : samples.front().features.size();
    std::vector<std::vector<double>> centroid(static_cast<size_t>(known_classes),
                                              std::vector<double>(f, 0.0));
    std::vector<size_t> count(static_cast<size_t>(known_classes), 0);
    for (const auto& s : samples) {
        if (s.original_label >= known_classes) continue;
        auto& c = centroid[static_cast<size_t>(s.original_label)];
        for (size_t i = 0; i < f; ++i) c[i] += s.features[i];
        ++count[static_cast<size_t>(s.original_label)];
    }
    for (int c = 0; c < known_classes; ++c)
        if (count[static_cast<size_t>(c)] > 0)
            for (auto& v : centroid[static_cast<size_t>(c)])
                v /= static_cast<double>(count[static_cast<size_t>(c)]);

    auto norm = [&](int c) {
        const auto& v = centroid[static_cast<size_t>(c)];
        return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    };
    auto dot = [&](int a, int b) {
        const auto& u = centroid[static_cast<size_t>(a)];
        const auto& v = centroid[static_cast<size_t>(b)];
        return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
    };

    std::vector<int> sim(static_cast<size_t>(known_classes), -1);
    for (int c = 0; c < known_classes; ++c) {
        double nc = norm(c);
        int best = -1;
        double best_score = 0.0;
        bool use_euclid = nc < 1e-12;
        for (int o = 0; o < known_classes; ++o) {
            if (o == c) continue;
            double score;
            if (!use_euclid) {
                double no = norm(o);
                if (no < 1e-12) {
                    use_euclid = true;
                    best = -1;
                    break;
                }
                score = dot(c, o) / (nc * no);
            } else {
                score = 0.0;
            }
            if (best < 0 || score > best_score) {
                best = o;
                best_score = score;
            }
        }
        if (use_euclid || best < 0) {
            // degenerate centroid: nearest by Euclidean distance
            best = -1;
            double best_d = 0.0;
            for (int o = 0; o < known_classes; ++o) {
                if (o == c) continue;
                double d2 = 0.0;
                for (size_t i = 0; i < f; ++i) {
                    double diff = centroid[static_cast<size_t>(c)][i] -
                                  centroid[static_cast<size_t>(o)][i];
                    d2 += diff * diff;
                }
                if (best < 0 || d2 < best_d) {
                    best = o;
                    best_d = d2;
                }
            }
        }
        sim[static_cast<size_t>(c)] = best;
    }
    return sim;
}

void inject_asymmetric_noise(std::vector<Sample>& samples, int known_classes,
                             double ratio, Rng& rng) {
    require(ratio >= 0.0 && ratio <= 1.0, "noise ratio must lie in [0, 1]");
    auto sim = similar_class_map(samples, known_classes);
    for (int c = 0; c < known_classes; ++c) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < samples.size(); ++i)
            if (samples[i].original_label == c) idx.push_back(i);
        if (idx.empty()) continue;
        rng.shuffle(idx);
        size_t n_flip =
            static_cast<size_t>(round_half_away(ratio * static_cast<double>(idx.size())));
        for (size_t k = 0; k < n_flip; ++k)
            samples[idx[k]].observed_label = sim[static_cast<size_t>(c)];
    }
}

std::vector<Split> make_splits(const Dataset& dataset) {
    std::vector<Split> splits;
    for (int d = 0; d < dataset.spec.num_domains; ++d) {
        Split sp;
        sp.test_domain = d;
        sp.known_classes = dataset.spec.known_classes;
        sp.unseen_classes = dataset.spec.unseen_classes;
        for (const auto& s : dataset.samples) {
            if (s.domain_id == d)
                sp.test.push_back(s);
            else if (s.original_label < dataset.spec.known_classes)
                sp.source.push_back(s);
        }
        splits.push_back(std::move(sp));
    }
    return splits;
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "id,domain,observed,original";
    for (int i = 0; i < dataset.spec.feature_dim; ++i) out << ",f" << i;
    out << "\n";
    out.precision(17);
    for (const auto& s : dataset.samples) {
        out << s.id << ',' << s.domain_id << ',' << s.observed_label << ','
            << s.original_label;
        for (double v : s.features) out << ',' << v;
        out << "\n";
    }
}

Dataset read_dataset_csv(const std::string& path, const BenchmarkSpec& spec) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Dataset ds;
    ds.spec = spec;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("id,", 0) == 0) continue;
        std::stringstream ss(line);
        std::string tok;
        Sample s;
        std::getline(ss, tok, ',');
        s.id = std::stoi(tok);
        std::getline(ss, tok, ',');
        s.domain_id = std::stoi(tok);
        std::getline(ss, tok, ',');
        s.observed_label = std::stoi(tok);
        std::getline(ss, tok, ',');
        s.original_label = std::stoi(tok);
        while (std::getline(ss, tok, ',')) s.features.push_back(std::stod(tok));
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

}  // namespace erelifm
