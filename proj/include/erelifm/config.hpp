#pragma once

#include <string>
#include <vector>

#include "erelifm/evidential.hpp"
#include "erelifm/flow.hpp"
#include "erelifm/meta.hpp"
#include "erelifm/synthbench.hpp"
#include "erelifm/utselc.hpp"

namespace erelifm {

// Full experiment description. Serialized as a flat-ish JSON document;
// unspecified fields keep their defaults.
struct ExperimentConfig {
    BenchmarkSpec bench;
    std::string noise_kind = "symmetric";  // symmetric | asymmetric
    double noise_ratio = 0.5;

    Stage1Config stage1;
    UtselcConfig cluster;

    // flow training
    std::vector<size_t> flow_hidden = {64, 64};
    int flow_steps = 8000;
    int flow_batch = 128;
    double flow_lr = 2e-3;
    int euler_steps = 20;
    size_t pair_cap = 256;
    int t_embed_dim = 8;

    MetaConfig meta;

    std::vector<uint64_t> seeds = {1, 2, 3};
    std::string out_dir = "out";

    // named variant: full, plain_ce, no_dccrfm, no_domain_ra,
    // no_category_ra, mixup, no_el_meta_test, no_ce_meta_test
    std::string variant = "full";

    void validate() const;
    void apply_variant();  // maps the variant name onto the meta flags
    bool needs_flow() const;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;  // canonical (sorted keys)
    std::string hash() const;          // FNV-1a of the canonical dump

    FlowConfig flow_config(const std::vector<int>& source_domains) const;
};

std::vector<std::string> ablation_variants();

// FNV-1a over a byte string, hex encoded
std::string fnv1a_hex(const std::string& bytes);

}  // namespace erelifm
