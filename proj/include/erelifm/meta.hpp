#pragma once

#include <string>
#include <vector>

#include "erelifm/flow.hpp"
#include "erelifm/mlp.hpp"
#include "erelifm/optim.hpp"
#include "erelifm/synthbench.hpp"
#include "erelifm/utselc.hpp"

namespace erelifm {

struct MetaConfig {
    int batch_size = 16;
    long total_steps = 2000;
    double outer_lr = 1e-3;
    double lr_decay_factor = 0.1;
    long lr_decay_step = 1600;  // decay after 8/10 of the budget
    double inner_lr = 1e-3;
    std::vector<size_t> hidden = {64, 64};

    // ablation flags
    bool no_dccrfm = false;
    bool no_domain_ra = false;
    bool no_category_ra = false;
    bool mixup_instead = false;  // implies no flow calls
    bool no_el_meta_test = false;
    bool no_ce_meta_test = false;
    bool literal_updates = false;  // two sequential updates instead of first-order meta

    void validate() const;
    bool wants_domain_ra() const { return !no_dccrfm && !no_domain_ra; }
    bool wants_category_ra() const { return !no_dccrfm && !no_category_ra; }
};

struct MetaBatch {
    Matrix clean;
    std::vector<int> y_c;
    std::vector<int> y_d;  // source-domain indices
    Matrix dr;             // domain-augmented, labeled y_c
    std::vector<int> y_dr;
    Matrix cr;  // category-augmented, labeled with the extra class
    std::vector<int> y_cr;
    Matrix noisy;
    std::vector<int> y_nc;
};

struct MetaStepLog {
    long step = 0;
    double lr = 0.0;
    double l_m_train = 0.0;
    double l_m_test = 0.0;
    double pseudo_agreement = 0.0;  // pseudo-label == observed label rate
};

struct RunLog {
    std::vector<MetaStepLog> steps;
    void write_csv(const std::string& path) const;
};

// Clean pool grouped for residual/mixup partner lookup.
struct MetaContext {
    std::vector<const Sample*> clean;
    std::vector<const Sample*> noisy;
    int known_classes = 0;
    std::vector<int> source_domains;  // raw ids, index order matches FlowConfig
    const FlowModel* flow = nullptr;  // may be null when ablated

    int domain_index(int raw) const;
};

MetaBatch build_meta_batch(const MetaContext& ctx,
                           const std::vector<const Sample*>& clean_batch,
                           const std::vector<const Sample*>& noisy_batch,
                           const MetaConfig& cfg, Rng& rng);

// L_CE(B_clean, y_c) + L_CE(B_dr, y_dr) + L_CE(B_cr, y_cr); empty ablated
// terms contribute 0. Returns loss; accumulates dL/dparams into grad_out.
double meta_train_loss(Mlp& backbone, const MetaBatch& batch,
                       std::vector<double>* grad_out = nullptr);

// Pseudo-label = argmax over the known-class logits (extra class
// excluded). L_EL(B_noisy, pseudo) + L_CE(B_noisy, y_nc).
double meta_test_loss(Mlp& backbone, const MetaBatch& batch, int known_classes,
                      const MetaConfig& cfg, std::vector<double>* grad_out = nullptr,
                      double* pseudo_agreement = nullptr);

// One first-order meta step: inner SGD step on L_m-train, L_m-test at the
// adapted parameters, outer update from both gradients.
MetaStepLog meta_step(Mlp& backbone, const MetaBatch& batch, int known_classes,
                      const MetaConfig& cfg, long step);

struct MetaResult {
    Mlp backbone;  // known_classes + 1 outputs
    RunLog log;
};

MetaResult train_erelifm(const Split& split, const CleanNoisyPartition& partition,
                         const FlowModel* flow, const MetaConfig& cfg, Rng rng);

// Plain cross-entropy training on the full (noisy) source set; the
// comparison baseline. Same architecture and schedule, known_classes
// outputs only.
Mlp train_plain_ce(const std::vector<Sample>& sources, int known_classes,
                   const MetaConfig& cfg, Rng rng);

}  // namespace erelifm
