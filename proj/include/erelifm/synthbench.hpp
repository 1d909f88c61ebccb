#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erelifm/rng.hpp"

namespace erelifm {

struct Sample {
    int id = 0;
    int domain_id = 0;
    int observed_label = 0;
    int original_label = 0;
    std::vector<double> features;

    bool is_clean() const { return observed_label == original_label; }
};

// Synthetic multi-domain benchmark: class means in feature space, one
// affine transform per domain (plane rotations + scale + translation),
// Gaussian cluster noise. Known classes are [0, known_classes); unseen
// classes are [known_classes, known_classes + unseen_classes).
struct BenchmarkSpec {
    int num_domains = 4;
    int feature_dim = 8;
    int known_classes = 6;
    int unseen_classes = 1;
    int samples_per_cell = 60;  // per (domain, class)

    double mean_radius = 4.0;        // class means drawn on a sphere of this radius
    double cluster_std = 0.5;        // per-cluster noise std
    double domain_angle_deg = 25.0;  // rotation angle step per domain index
    double domain_scale = 1.0;
    double domain_translation = 0.5;  // translation step per domain index

    uint64_t seed = 1;

    int total_classes() const { return known_classes + unseen_classes; }
    void validate() const;
};

struct Dataset {
    BenchmarkSpec spec;
    std::vector<Sample> samples;
};

struct Split {
    int test_domain = 0;
    int known_classes = 0;
    int unseen_classes = 0;
    std::vector<Sample> source;  // known categories from the other domains
    std::vector<Sample> test;    // all categories of the held-out domain
};

Dataset generate(const BenchmarkSpec& spec);

// Class means / domain transform, exposed for oracle-style tests.
std::vector<std::vector<double>> class_means(const BenchmarkSpec& spec);
std::vector<double> apply_domain_transform(const BenchmarkSpec& spec, int domain,
                                           const std::vector<double>& x);

// Flips exactly round(ratio * N) observed labels, chosen uniformly
// without replacement, each to a uniform other known class.
void inject_symmetric_noise(std::vector<Sample>& samples, int known_classes,
                            double ratio, Rng& rng);

// Flips round(ratio * N_c) samples of each class c to its most similar
// other class by cosine similarity of class feature centroids.
void inject_asymmetric_noise(std::vector<Sample>& samples, int known_classes,
                             double ratio, Rng& rng);

// Most-similar-class map used by asymmetric noise; exposed for tests.
std::vector<int> similar_class_map(const std::vector<Sample>& samples, int known_classes);

// One split per held-out domain. Source lists are noise-free copies;
// noise injection happens on the split's source list.
std::vector<Split> make_splits(const Dataset& dataset);

// CSV with header: id,domain,observed,original,f0..f{F-1}
void write_dataset_csv(const Dataset& dataset, const std::string& path);
Dataset read_dataset_csv(const std::string& path, const BenchmarkSpec& spec);

}  // namespace erelifm
