#include "erelifm/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace erelifm {

using nlohmann::json;

void ExperimentConfig::validate() const {
    bench.validate();
    require(noise_kind == "symmetric" || noise_kind == "asymmetric",
            "noise kind must be symmetric or asymmetric");
    require(noise_ratio >= 0.0 && noise_ratio <= 1.0, "noise ratio must lie in [0, 1]");
    require(!seeds.empty(), "at least one seed required");
    meta.validate();
}

bool ExperimentConfig::needs_flow() const {
    if (variant == "plain_ce") return false;
    MetaConfig m = meta;
    ExperimentConfig tmp = *this;
    tmp.apply_variant();
    return !tmp.meta.mixup_instead &&
           (tmp.meta.wants_domain_ra() || tmp.meta.wants_category_ra());
}

void ExperimentConfig::apply_variant() {
    if (variant == "full" || variant == "plain_ce") return;
    if (variant == "no_dccrfm")
        meta.no_dccrfm = true;
    else if (variant == "no_domain_ra")
        meta.no_domain_ra = true;
    else if (variant == "no_category_ra")
        meta.no_category_ra = true;
    else if (variant == "mixup")
        meta.mixup_instead = true;
    else if (variant == "no_el_meta_test")
        meta.no_el_meta_test = true;
    else if (variant == "no_ce_meta_test")
        meta.no_ce_meta_test = true;
    else
        throw std::invalid_argument("unknown variant: " + variant);
}

std::vector<std::string> ablation_variants() {
    return {"full",  "no_dccrfm",       "no_domain_ra",   "no_category_ra",
            "mixup", "no_el_meta_test", "no_ce_meta_test"};
}

namespace {

json to_json(const ExperimentConfig& c) {
    json j;
    j["bench"] = {{"num_domains", c.bench.num_domains},
                  {"feature_dim", c.bench.feature_dim},
                  {"known_classes", c.bench.known_classes},
                  {"unseen_classes", c.bench.unseen_classes},
                  {"samples_per_cell", c.bench.samples_per_cell},
                  {"mean_radius", c.bench.mean_radius},
                  {"cluster_std", c.bench.cluster_std},
                  {"domain_angle_deg", c.bench.domain_angle_deg},
                  {"domain_scale", c.bench.domain_scale},
                  {"domain_translation", c.bench.domain_translation},
                  {"seed", c.bench.seed}};
    j["noise"] = {{"kind", c.noise_kind}, {"ratio", c.noise_ratio}};
    j["stage1"] = {{"epochs", c.stage1.epochs},
                   {"batch_size", c.stage1.batch_size},
                   {"hidden", c.stage1.hidden},
                   {"lr_min", c.stage1.lr_min},
                   {"lr_max", c.stage1.lr_max},
                   {"cycle_epochs", c.stage1.cycle_epochs},
                   {"momentum", c.stage1.momentum}};
    j["cluster"] = {{"per_domain", c.cluster.per_domain},
                    {"vector_scores", c.cluster.vector_scores}};
    j["flow"] = {{"hidden", c.flow_hidden},
                 {"steps", c.flow_steps},
                 {"batch", c.flow_batch},
                 {"lr", c.flow_lr},
                 {"euler_steps", c.euler_steps},
                 {"pair_cap", c.pair_cap},
                 {"t_embed_dim", c.t_embed_dim}};
    j["meta"] = {{"batch_size", c.meta.batch_size},
                 {"total_steps", c.meta.total_steps},
                 {"outer_lr", c.meta.outer_lr},
                 {"lr_decay_factor", c.meta.lr_decay_factor},
                 {"lr_decay_step", c.meta.lr_decay_step},
                 {"inner_lr", c.meta.inner_lr},
                 {"hidden", c.meta.hidden},
                 {"literal_updates", c.meta.literal_updates}};
    j["seeds"] = c.seeds;
    j["out_dir"] = c.out_dir;
    j["variant"] = c.variant;
    return j;
}

template <typename T>
void opt(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

ExperimentConfig parse(const json& j) {
    ExperimentConfig c;
    if (j.contains("bench")) {
        const json& b = j.at("bench");
        opt(b, "num_domains", c.bench.num_domains);
        opt(b, "feature_dim", c.bench.feature_dim);
        opt(b, "known_classes", c.bench.known_classes);
        opt(b, "unseen_classes", c.bench.unseen_classes);
        opt(b, "samples_per_cell", c.bench.samples_per_cell);
        opt(b, "mean_radius", c.bench.mean_radius);
        opt(b, "cluster_std", c.bench.cluster_std);
        opt(b, "domain_angle_deg", c.bench.domain_angle_deg);
        opt(b, "domain_scale", c.bench.domain_scale);
        opt(b, "domain_translation", c.bench.domain_translation);
        opt(b, "seed", c.bench.seed);
    }
    if (j.contains("noise")) {
        opt(j.at("noise"), "kind", c.noise_kind);
        opt(j.at("noise"), "ratio", c.noise_ratio);
    }
    if (j.contains("stage1")) {
        const json& s = j.at("stage1");
        opt(s, "epochs", c.stage1.epochs);
        opt(s, "batch_size", c.stage1.batch_size);
        opt(s, "hidden", c.stage1.hidden);
        opt(s, "lr_min", c.stage1.lr_min);
        opt(s, "lr_max", c.stage1.lr_max);
        opt(s, "cycle_epochs", c.stage1.cycle_epochs);
        opt(s, "momentum", c.stage1.momentum);
    }
    if (j.contains("cluster")) {
        opt(j.at("cluster"), "per_domain", c.cluster.per_domain);
        opt(j.at("cluster"), "vector_scores", c.cluster.vector_scores);
    }
    if (j.contains("flow")) {
        const json& f = j.at("flow");
        opt(f, "hidden", c.flow_hidden);
        opt(f, "steps", c.flow_steps);
        opt(f, "batch", c.flow_batch);
        opt(f, "lr", c.flow_lr);
        opt(f, "euler_steps", c.euler_steps);
        opt(f, "pair_cap", c.pair_cap);
        opt(f, "t_embed_dim", c.t_embed_dim);
    }
    if (j.contains("meta")) {
        const json& m = j.at("meta");
        opt(m, "batch_size", c.meta.batch_size);
        opt(m, "total_steps", c.meta.total_steps);
        opt(m, "outer_lr", c.meta.outer_lr);
        opt(m, "lr_decay_factor", c.meta.lr_decay_factor);
        opt(m, "lr_decay_step", c.meta.lr_decay_step);
        opt(m, "inner_lr", c.meta.inner_lr);
        opt(m, "hidden", c.meta.hidden);
        opt(m, "literal_updates", c.meta.literal_updates);
    }
    opt(j, "seeds", c.seeds);
    opt(j, "out_dir", c.out_dir);
    opt(j, "variant", c.variant);
    return c;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    ExperimentConfig c = parse(json::parse(text));
    c.validate();
    return c;
}

std::string ExperimentConfig::to_json_text() const {
    return to_json(*this).dump(2);  // nlohmann keeps object keys sorted
}

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_json_text()); }

FlowConfig ExperimentConfig::flow_config(const std::vector<int>& source_domains) const {
    FlowConfig fc;
    fc.feature_dim = bench.feature_dim;
    fc.known_classes = bench.known_classes;
    fc.source_domains = source_domains;
    fc.hidden = flow_hidden;
    fc.t_embed_dim = t_embed_dim;
    fc.euler_steps = euler_steps;
    fc.pair_cap = pair_cap;
    fc.train_steps = flow_steps;
    fc.batch_size = flow_batch;
    fc.lr = flow_lr;
    return fc;
}

}  // namespace erelifm
