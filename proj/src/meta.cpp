#include "erelifm/meta.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "erelifm/losses.hpp"

namespace erelifm {

void MetaConfig::validate() const {
    require(batch_size >= 1, "batch size must be positive");
    require(total_steps >= 0, "step count must be non-negative");
    if (mixup_instead)
        require(!wants_domain_ra() || true, "");  // mixup replaces the flow calls entirely
}

int MetaContext::domain_index(int raw) const {
    for (size_t i = 0; i < source_domains.size(); ++i)
        if (source_domains[i] == raw) return static_cast<int>(i);
    throw std::invalid_argument("sample domain is not a source domain");
}

void RunLog::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "step,lr,l_m_train,l_m_test,pseudo_agreement\n";
    out.precision(17);
    for (const auto& s : steps)
        out << s.step << ',' << s.lr << ',' << s.l_m_train << ',' << s.l_m_test << ','
            << s.pseudo_agreement << "\n";
}

namespace {

// cycling shuffled iterator over a sample pool
struct CyclingIter {
    const std::vector<const Sample*>* pool;
    Rng rng;
    std::vector<size_t> order;
    size_t pos = 0;

    CyclingIter(const std::vector<const Sample*>& p, Rng r) : pool(&p), rng(r) {
        order.resize(p.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
    }

    std::vector<const Sample*> next(size_t n) {
        std::vector<const Sample*> out;
        out.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            if (pos >= order.size()) {
                rng.shuffle(order);
                pos = 0;
            }
            out.push_back((*pool)[order[pos++]]);
        }
        return out;
    }
};

void set_row(Matrix& m, size_t row, const std::vector<double>& v) {
    for (size_t c = 0; c < v.size(); ++c) m(row, c) = v[c];
}

void accumulate(std::vector<double>& acc, const std::vector<double>& g) {
    if (acc.empty()) acc.assign(g.size(), 0.0);
    for (size_t i = 0; i < g.size(); ++i) acc[i] += g[i];
}

}  // namespace

MetaBatch build_meta_batch(const MetaContext& ctx,
                           const std::vector<const Sample*>& clean_batch,
                           const std::vector<const Sample*>& noisy_batch,
                           const MetaConfig& cfg, Rng& rng) {
    const size_t f = clean_batch.empty() ? 0 : clean_batch.front()->features.size();
    const int nd = static_cast<int>(ctx.source_domains.size());
    const int ck = ctx.known_classes;
    const int extra_class = ck;

    MetaBatch batch;
    batch.clean = features_matrix(clean_batch);
    for (const Sample* s : clean_batch) {
        batch.y_c.push_back(s->observed_label);
        batch.y_d.push_back(ctx.domain_index(s->domain_id));
    }
    batch.noisy = features_matrix(noisy_batch);
    for (const Sample* s : noisy_batch) batch.y_nc.push_back(s->observed_label);

    const bool domain_ra = cfg.wants_domain_ra() && nd >= 2;
    const bool category_ra = cfg.wants_category_ra();
    if (cfg.wants_domain_ra() && nd < 2) {
        static bool warned = false;
        if (!warned) {
            std::cerr << "[meta] single source domain; domain-residual branch disabled\n";
            warned = true;
        }
    }

    // mixup partner pools, grouped lazily
    std::map<std::pair<int, int>, std::vector<const Sample*>> cells;
    if (cfg.mixup_instead) {
        for (const Sample* s : ctx.clean)
            cells[{ctx.domain_index(s->domain_id), s->observed_label}].push_back(s);
    }

    auto pick_other = [&](int current, int count) {
        int v = static_cast<int>(rng.below(static_cast<uint64_t>(count - 1)));
        if (v >= current) ++v;
        return v;
    };

    if (domain_ra) batch.dr = Matrix(clean_batch.size(), f);
    if (category_ra) batch.cr = Matrix(clean_batch.size(), f);

    for (size_t i = 0; i < clean_batch.size(); ++i) {
        const Sample* s = clean_batch[i];
        const int y_c = batch.y_c[i];
        const int y_d = batch.y_d[i];
        int hat_d = nd >= 2 ? pick_other(y_d, nd) : y_d;
        int hat_c = pick_other(y_c, ck);

        if (domain_ra) {
            std::vector<double> aug;
            if (cfg.mixup_instead) {
                auto& partners = cells[{hat_d, y_c}];
                if (partners.empty()) {
                    aug = s->features;
                } else {
                    const Sample* p = partners[rng.below(partners.size())];
                    double lam = rng.uniform();
                    aug.resize(f);
                    for (size_t k = 0; k < f; ++k)
                        aug[k] = lam * s->features[k] + (1.0 - lam) * p->features[k];
                }
            } else {
                auto r = sample_residual(*ctx.flow, {y_c, y_c, y_d, hat_d}, rng);
                aug = augment(s->features, r);
            }
            set_row(batch.dr, i, aug);
            batch.y_dr.push_back(y_c);
        }
        if (category_ra) {
            std::vector<double> aug;
            if (cfg.mixup_instead) {
                auto& partners = cells[{y_d, hat_c}];
                if (partners.empty()) {
                    aug = s->features;
                } else {
                    const Sample* p = partners[rng.below(partners.size())];
                    double lam = rng.uniform();
                    aug.resize(f);
                    for (size_t k = 0; k < f; ++k)
                        aug[k] = lam * s->features[k] + (1.0 - lam) * p->features[k];
                }
            } else {
                auto r = sample_residual(*ctx.flow, {y_c, hat_c, y_d, y_d}, rng);
                aug = augment(s->features, r);
            }
            set_row(batch.cr, i, aug);
            batch.y_cr.push_back(extra_class);
        }
    }
    return batch;
}

double meta_train_loss(Mlp& backbone, const MetaBatch& batch, std::vector<double>* grad_out) {
    double total = 0.0;
    auto term = [&](const Matrix& x, const std::vector<int>& y) {
        if (x.rows == 0) return;
        Matrix logits = backbone.forward(x);
        LossGrad lg = cross_entropy(logits, y);
        total += lg.loss;
        if (grad_out) {
            backbone.backward(lg.grad);
            accumulate(*grad_out, backbone.grads_flat());
        }
    };
    term(batch.clean, batch.y_c);
    term(batch.dr, batch.y_dr);
    term(batch.cr, batch.y_cr);
    return total;
}

double meta_test_loss(Mlp& backbone, const MetaBatch& batch, int known_classes,
                      const MetaConfig& cfg, std::vector<double>* grad_out,
                      double* pseudo_agreement) {
    if (batch.noisy.rows == 0) {
        if (pseudo_agreement) *pseudo_agreement = 0.0;
        return 0.0;
    }
    Matrix logits = backbone.forward_eval(batch.noisy);

    // pseudo-labels: argmax over the known-class logits only
    std::vector<int> pseudo(batch.noisy.rows);
    size_t agree = 0;
    for (size_t r = 0; r < logits.rows; ++r) {
        int best = 0;
        for (int c = 1; c < known_classes; ++c)
            if (logits(r, static_cast<size_t>(c)) > logits(r, static_cast<size_t>(best)))
                best = c;
        pseudo[r] = best;
        if (best == batch.y_nc[r]) ++agree;
    }
    if (pseudo_agreement)
        *pseudo_agreement = static_cast<double>(agree) / static_cast<double>(logits.rows);

    double total = 0.0;
    if (!cfg.no_el_meta_test) {
        Matrix l = backbone.forward(batch.noisy);
        LossGrad lg = evidential_loss(l, pseudo);
        total += lg.loss;
        if (grad_out) {
            backbone.backward(lg.grad);
            accumulate(*grad_out, backbone.grads_flat());
        }
    }
    if (!cfg.no_ce_meta_test) {
        Matrix l = backbone.forward(batch.noisy);
        LossGrad lg = cross_entropy(l, batch.y_nc);
        total += lg.loss;
        if (grad_out) {
            backbone.backward(lg.grad);
            accumulate(*grad_out, backbone.grads_flat());
        }
    }
    return total;
}

MetaStepLog meta_step(Mlp& backbone, const MetaBatch& batch, int known_classes,
                      const MetaConfig& cfg, long step) {
    MetaStepLog log;
    log.step = step;
    log.lr = LrSchedule::step_decay(cfg.outer_lr, cfg.lr_decay_factor, cfg.lr_decay_step)
                 .at(step);

    if (cfg.literal_updates) {
        // taken-literally mode: update on L_m-train, then on the sum
        std::vector<double> g_train;
        log.l_m_train = meta_train_loss(backbone, batch, &g_train);
        backbone.apply_update(g_train, log.lr);

        std::vector<double> g_sum;
        meta_train_loss(backbone, batch, &g_sum);
        log.l_m_test = meta_test_loss(backbone, batch, known_classes, cfg, &g_sum,
                                      &log.pseudo_agreement);
        backbone.apply_update(g_sum, log.lr);
    } else {
        std::vector<double> g_train;
        log.l_m_train = meta_train_loss(backbone, batch, &g_train);

        // inner adaptation, then L_m-test at the adapted parameters
        auto theta = backbone.params_flat();
        backbone.apply_update(g_train, cfg.inner_lr);
        std::vector<double> g_test;
        log.l_m_test = meta_test_loss(backbone, batch, known_classes, cfg, &g_test,
                                      &log.pseudo_agreement);
        backbone.set_params_flat(theta);

        // first-order outer update on the original parameters
        if (!g_test.empty()) accumulate(g_train, g_test);
        backbone.apply_update(g_train, log.lr);
    }

    if (!std::isfinite(log.l_m_train) || !std::isfinite(log.l_m_test))
        throw std::runtime_error("non-finite meta loss at step " + std::to_string(step));
    return log;
}

MetaResult train_erelifm(const Split& split, const CleanNoisyPartition& partition,
                         const FlowModel* flow, const MetaConfig& cfg, Rng rng) {
    cfg.validate();

    MetaContext ctx;
    ctx.known_classes = split.known_classes;
    for (const auto& s : split.source)
        if (std::find(ctx.source_domains.begin(), ctx.source_domains.end(), s.domain_id) ==
            ctx.source_domains.end())
            ctx.source_domains.push_back(s.domain_id);
    std::sort(ctx.source_domains.begin(), ctx.source_domains.end());
    for (const auto& s : split.source)
        (partition.is_assigned_clean(s.id) ? ctx.clean : ctx.noisy).push_back(&s);
    require(!ctx.clean.empty(), "empty clean set: cannot meta-train");
    ctx.flow = flow;
    if (!cfg.no_dccrfm && !cfg.mixup_instead)
        require(flow != nullptr, "flow model required unless ablated");

    const size_t feat = split.source.front().features.size();
    std::vector<size_t> arch;
    arch.push_back(feat);
    for (size_t h : cfg.hidden) arch.push_back(h);
    arch.push_back(static_cast<size_t>(split.known_classes) + 1);  // extra class

    Rng init_rng = rng.split("init");
    MetaResult res;
    res.backbone = Mlp::random(arch, init_rng);

    CyclingIter clean_iter(ctx.clean, rng.split("clean-order"));
    CyclingIter noisy_iter(ctx.noisy, rng.split("noisy-order"));
    Rng aug_rng = rng.split("augment");

    for (long step = 0; step < cfg.total_steps; ++step) {
        auto cb = clean_iter.next(static_cast<size_t>(cfg.batch_size));
        auto nb = ctx.noisy.empty()
                      ? std::vector<const Sample*>{}
                      : noisy_iter.next(static_cast<size_t>(cfg.batch_size));
        MetaBatch batch = build_meta_batch(ctx, cb, nb, cfg, aug_rng);
        res.log.steps.push_back(
            meta_step(res.backbone, batch, split.known_classes, cfg, step));
    }
    return res;
}

Mlp train_plain_ce(const std::vector<Sample>& sources, int known_classes,
                   const MetaConfig& cfg, Rng rng) {
    require(!sources.empty(), "plain CE baseline needs samples");
    const size_t feat = sources.front().features.size();
    std::vector<size_t> arch;
    arch.push_back(feat);
    for (size_t h : cfg.hidden) arch.push_back(h);
    arch.push_back(static_cast<size_t>(known_classes));

    Rng init_rng = rng.split("init");
    Mlp model = Mlp::random(arch, init_rng);

    std::vector<const Sample*> pool;
    for (const auto& s : sources) pool.push_back(&s);
    CyclingIter iter(pool, rng.split("order"));

    Sgd opt(LrSchedule::step_decay(cfg.outer_lr, cfg.lr_decay_factor, cfg.lr_decay_step));
    for (long step = 0; step < cfg.total_steps; ++step) {
        auto batch = iter.next(static_cast<size_t>(cfg.batch_size));
        Matrix x = features_matrix(batch);
        std::vector<int> y;
        for (const Sample* s : batch) y.push_back(s->observed_label);
        Matrix logits = model.forward(x);
        LossGrad lg = cross_entropy(logits, y);
        if (!std::isfinite(lg.loss))
            throw std::runtime_error("plain CE baseline diverged");
        model.backward(lg.grad);
        opt.step(model);
    }
    return model;
}

}  // namespace erelifm
