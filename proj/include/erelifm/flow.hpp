#pragma once

#include <map>
#include <string>
#include <vector>

#include "erelifm/mlp.hpp"
#include "erelifm/optim.hpp"
#include "erelifm/rng.hpp"
#include "erelifm/synthbench.hpp"

namespace erelifm {

// Ordered condition tuple for a residual: a domain condition keeps the
// category fixed and changes the domain, a category condition keeps the
// domain fixed and changes the category.
struct ResidualCondition {
    int src_cat = 0;
    int tgt_cat = 0;
    int src_dom = 0;  // index into the source-domain list, not the raw domain id
    int tgt_dom = 0;

    bool operator<(const ResidualCondition& o) const {
        return std::tie(src_cat, tgt_cat, src_dom, tgt_dom) <
               std::tie(o.src_cat, o.tgt_cat, o.src_dom, o.tgt_dom);
    }
    bool operator==(const ResidualCondition& o) const = default;
};

struct ResidualPair {
    std::vector<double> residual;  // target features - source features
    ResidualCondition condition;
    int source_id = 0;
};

struct FlowConfig {
    int feature_dim = 8;
    int known_classes = 6;
    std::vector<int> source_domains;  // raw domain ids, index order defines the encoding
    std::vector<size_t> hidden = {64, 64};
    int t_embed_dim = 8;
    int euler_steps = 20;   // K
    size_t pair_cap = 256;  // per condition
    int train_steps = 8000;
    int batch_size = 128;
    double lr = 2e-3;     // Adam
    double psi_gain = 4.0;  // scales the one-hot block up to the residual magnitude

    int psi_dim() const {
        return 2 * known_classes + 2 * static_cast<int>(source_domains.size());
    }
    int domain_index(int raw_domain_id) const;
};

// One-hot concatenation [src_cat | tgt_cat | src_dom | tgt_dom].
std::vector<double> encode_condition(const ResidualCondition& q, const FlowConfig& cfg);

// 8-dim sinusoidal features of t
std::vector<double> time_embedding(double t, int dim);

struct FlowModel {
    FlowConfig cfg;
    Mlp field;  // input [r | t-embed | psi], output feature_dim

    static FlowModel create(const FlowConfig& cfg, Rng& rng);

    size_t input_width() const {
        return static_cast<size_t>(cfg.feature_dim + cfg.t_embed_dim + cfg.psi_dim());
    }

    std::vector<double> eval(const std::vector<double>& r, double t,
                             const ResidualCondition& q) const;

    void save(const std::string& path) const;
    static FlowModel load(const std::string& path);
};

// All ordered cross-domain same-category and same-domain cross-category
// pairs among the clean samples, uniformly capped per condition.
struct PairSet {
    std::vector<ResidualPair> pairs;
    std::map<ResidualCondition, size_t> coverage;  // pair count per condition
};
PairSet build_residual_pairs(const std::vector<Sample>& clean_samples,
                             const FlowConfig& cfg, Rng& rng);

// Flow-matching objective: r_t = (1-t) r0 + t r1, target r1 - r0,
// mean squared error normalized by batch and feature dim. Fills the
// model's gradient buffers.
double cfm_loss(FlowModel& model, const std::vector<const ResidualPair*>& batch, Rng& rng);

struct FlowTrainLog {
    std::vector<double> step_loss;
};
FlowTrainLog train_flow(FlowModel& model, const PairSet& pairs, Rng rng);

// Explicit Euler from r0 ~ N(0, I) over K steps.
std::vector<double> sample_residual(const FlowModel& model, const ResidualCondition& q,
                                    Rng& rng, int euler_steps = 0);

std::vector<double> augment(const std::vector<double>& features,
                            const std::vector<double>& residual);

void write_coverage_csv(const PairSet& pairs, const std::string& path);

}  // namespace erelifm
