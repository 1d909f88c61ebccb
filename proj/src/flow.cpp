#include "erelifm/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace erelifm {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

int FlowConfig::domain_index(int raw_domain_id) const {
    for (size_t i = 0; i < source_domains.size(); ++i)
        if (source_domains[i] == raw_domain_id) return static_cast<int>(i);
    throw std::invalid_argument("domain id is not a source domain");
}

std::vector<double> encode_condition(const ResidualCondition& q, const FlowConfig& cfg) {
    const int ck = cfg.known_classes;
    const int nd = static_cast<int>(cfg.source_domains.size());
    require(q.src_cat >= 0 && q.src_cat < ck, "src_cat out of range");
    require(q.tgt_cat >= 0 && q.tgt_cat < ck, "tgt_cat out of range");
    require(q.src_dom >= 0 && q.src_dom < nd, "src_dom out of range");
    require(q.tgt_dom >= 0 && q.tgt_dom < nd, "tgt_dom out of range");
    std::vector<double> psi(static_cast<size_t>(cfg.psi_dim()), 0.0);
    psi[static_cast<size_t>(q.src_cat)] = 1.0;
    psi[static_cast<size_t>(ck + q.tgt_cat)] = 1.0;
    psi[static_cast<size_t>(2 * ck + q.src_dom)] = 1.0;
    psi[static_cast<size_t>(2 * ck + nd + q.tgt_dom)] = 1.0;
    return psi;
}

std::vector<double> time_embedding(double t, int dim) {
    std::vector<double> emb(static_cast<size_t>(dim));
    for (int k = 0; k < dim / 2; ++k) {
        double f = std::pow(2.0, k);
        emb[static_cast<size_t>(2 * k)] = std::sin(kTwoPi * f * t);
        emb[static_cast<size_t>(2 * k + 1)] = std::cos(kTwoPi * f * t);
    }
    return emb;
}

FlowModel FlowModel::create(const FlowConfig& cfg, Rng& rng) {
    FlowModel m;
    m.cfg = cfg;
    std::vector<size_t> arch;
    arch.push_back(static_cast<size_t>(cfg.feature_dim + cfg.t_embed_dim + cfg.psi_dim()));
    for (size_t h : cfg.hidden) arch.push_back(h);
    arch.push_back(static_cast<size_t>(cfg.feature_dim));
    m.field = Mlp::random(arch, rng);
    return m;
}

namespace {
void fill_flow_input(Matrix& input, size_t row, const std::vector<double>& r, double t,
                     const std::vector<double>& psi, const FlowConfig& cfg) {
    size_t c = 0;
    for (double v : r) input(row, c++) = v;
    for (double v : time_embedding(t, cfg.t_embed_dim)) input(row, c++) = v;
    for (double v : psi) input(row, c++) = cfg.psi_gain * v;
}
}  // namespace

std::vector<double> FlowModel::eval(const std::vector<double>& r, double t,
                                    const ResidualCondition& q) const {
    require(r.size() == static_cast<size_t>(cfg.feature_dim), "residual dim mismatch");
    Matrix input(1, input_width());
    fill_flow_input(input, 0, r, t, encode_condition(q, cfg), cfg);
    Matrix out = field.forward_eval(input);
    return {out.data.begin(), out.data.end()};
}

PairSet build_residual_pairs(const std::vector<Sample>& clean_samples,
                             const FlowConfig& cfg, Rng& rng) {
    require(!clean_samples.empty(), "cannot build residual pairs from an empty clean set");

    // (domain index, class) -> samples
    std::map<std::pair<int, int>, std::vector<const Sample*>> cells;
    for (const auto& s : clean_samples)
        cells[{cfg.domain_index(s.domain_id), s.observed_label}].push_back(&s);

    const int nd = static_cast<int>(cfg.source_domains.size());
    PairSet out;

    auto add_condition = [&](const ResidualCondition& q,
                             const std::vector<const Sample*>& src,
                             const std::vector<const Sample*>& tgt) {
        if (src.empty() || tgt.empty()) return;
        const size_t total = src.size() * tgt.size();
        std::vector<size_t> idx;
        if (total <= cfg.pair_cap) {
            idx.resize(total);
            for (size_t i = 0; i < total; ++i) idx[i] = i;
        } else {
            idx.resize(total);
            for (size_t i = 0; i < total; ++i) idx[i] = i;
            rng.shuffle(idx);
            idx.resize(cfg.pair_cap);
            std::sort(idx.begin(), idx.end());
        }
        for (size_t flat : idx) {
            const Sample* a = src[flat / tgt.size()];
            const Sample* b = tgt[flat % tgt.size()];
            ResidualPair p;
            p.condition = q;
            p.source_id = a->id;
            p.residual.resize(a->features.size());
            for (size_t i = 0; i < p.residual.size(); ++i)
                p.residual[i] = b->features[i] - a->features[i];
            out.pairs.push_back(std::move(p));
        }
        out.coverage[q] += idx.size();
    };

    auto cell = [&](int d, int c) -> const std::vector<const Sample*>& {
        static const std::vector<const Sample*> empty;
        auto it = cells.find({d, c});
        return it == cells.end() ? empty : it->second;
    };

    // domain conditions: same category, different domain
    for (int c = 0; c < cfg.known_classes; ++c)
        for (int di = 0; di < nd; ++di)
            for (int dj = 0; dj < nd; ++dj) {
                if (di == dj) continue;
                add_condition({c, c, di, dj}, cell(di, c), cell(dj, c));
            }
    // category conditions: same domain, different category
    for (int d = 0; d < nd; ++d)
        for (int ci = 0; ci < cfg.known_classes; ++ci)
            for (int cj = 0; cj < cfg.known_classes; ++cj) {
                if (ci == cj) continue;
                add_condition({ci, cj, d, d}, cell(d, ci), cell(d, cj));
            }
    return out;
}

double cfm_loss(FlowModel& model, const std::vector<const ResidualPair*>& batch, Rng& rng) {
    require(!batch.empty(), "cfm_loss needs a nonempty batch");
    const size_t f = static_cast<size_t>(model.cfg.feature_dim);
    const size_t b = batch.size();

    Matrix input(b, model.input_width());
    Matrix target(b, f);
    for (size_t i = 0; i < b; ++i) {
        const ResidualPair& p = *batch[i];
        std::vector<double> r0 = rng.normal_vec(f);
        double t = rng.uniform();
        std::vector<double> rt(f);
        for (size_t k = 0; k < f; ++k) {
            rt[k] = (1.0 - t) * r0[k] + t * p.residual[k];
            target(i, k) = p.residual[k] - r0[k];
        }
        fill_flow_input(input, i, rt, t, encode_condition(p.condition, model.cfg),
                        model.cfg);
    }

    Matrix out = model.field.forward(input);
    const double scale = 1.0 / (static_cast<double>(b) * static_cast<double>(f));
    Matrix grad(b, f);
    double loss = 0.0;
    for (size_t i = 0; i < out.size(); ++i) {
        double d = out.data[i] - target.data[i];
        loss += d * d * scale;
        grad.data[i] = 2.0 * d * scale;
    }
    model.field.backward(grad);
    return loss;
}

FlowTrainLog train_flow(FlowModel& model, const PairSet& pairs, Rng rng) {
    require(!pairs.pairs.empty(), "train_flow needs residual pairs");
    // decay twice over the run; the tail averages out minibatch noise
    Adam opt(LrSchedule::step_decay(model.cfg.lr, 0.1,
                                    std::max(1, model.cfg.train_steps / 3)));
    Rng batch_rng = rng.split("batch");
    Rng noise_rng = rng.split("noise");

    FlowTrainLog log;
    for (int step = 0; step < model.cfg.train_steps; ++step) {
        std::vector<const ResidualPair*> batch;
        batch.reserve(static_cast<size_t>(model.cfg.batch_size));
        for (int i = 0; i < model.cfg.batch_size; ++i)
            batch.push_back(&pairs.pairs[batch_rng.below(pairs.pairs.size())]);
        double loss = cfm_loss(model, batch, noise_rng);
        if (!std::isfinite(loss))
            throw std::runtime_error("flow training diverged at step " + std::to_string(step));
        opt.step(model.field);
        log.step_loss.push_back(loss);
    }
    return log;
}

std::vector<double> sample_residual(const FlowModel& model, const ResidualCondition& q,
                                    Rng& rng, int euler_steps) {
    const int steps = euler_steps > 0 ? euler_steps : model.cfg.euler_steps;
    require(steps >= 1, "need at least one Euler step");
    std::vector<double> r = rng.normal_vec(static_cast<size_t>(model.cfg.feature_dim));
    const double h = 1.0 / static_cast<double>(steps);
    for (int k = 0; k < steps; ++k) {
        auto v = model.eval(r, static_cast<double>(k) * h, q);
        for (size_t i = 0; i < r.size(); ++i) r[i] += h * v[i];
    }
    return r;
}

std::vector<double> augment(const std::vector<double>& features,
                            const std::vector<double>& residual) {
    require(features.size() == residual.size(), "feature/residual dim mismatch");
    std::vector<double> out(features.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = features[i] + residual[i];
    return out;
}

void write_coverage_csv(const PairSet& pairs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "src_cat,tgt_cat,src_dom,tgt_dom,pair_count\n";
    for (const auto& [q, n] : pairs.coverage)
        out << q.src_cat << ',' << q.tgt_cat << ',' << q.src_dom << ',' << q.tgt_dom << ','
            << n << "\n";
}

void FlowModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "erelifm-flow v1\n";
    out.precision(17);
    out << cfg.feature_dim << ' ' << cfg.known_classes << ' ' << cfg.t_embed_dim << ' '
        << cfg.euler_steps << ' ' << cfg.psi_gain << '\n';
    out << cfg.source_domains.size();
    for (int d : cfg.source_domains) out << ' ' << d;
    out << '\n';
    out << cfg.hidden.size();
    for (size_t h : cfg.hidden) out << ' ' << h;
    out << '\n';
    out.precision(17);
    auto params = field.params_flat();
    out << params.size() << '\n';
    for (double p : params) out << p << '\n';
}

FlowModel FlowModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    while (std::getline(in, header) && !header.empty() && header[0] == '#') {
    }
    if (header != "erelifm-flow v1")
        throw std::runtime_error("unrecognized flow model file: " + path);
    FlowConfig cfg;
    in >> cfg.feature_dim >> cfg.known_classes >> cfg.t_embed_dim >> cfg.euler_steps >>
        cfg.psi_gain;
    size_t nd = 0;
    in >> nd;
    cfg.source_domains.resize(nd);
    for (auto& d : cfg.source_domains) in >> d;
    size_t nh = 0;
    in >> nh;
    cfg.hidden.resize(nh);
    for (auto& h : cfg.hidden) in >> h;

    FlowModel m;
    m.cfg = cfg;
    std::vector<size_t> arch;
    arch.push_back(static_cast<size_t>(cfg.feature_dim + cfg.t_embed_dim + cfg.psi_dim()));
    for (size_t h : cfg.hidden) arch.push_back(h);
    arch.push_back(static_cast<size_t>(cfg.feature_dim));
    m.field = Mlp(arch);

    size_t np = 0;
    in >> np;
    std::vector<double> params(np);
    for (auto& p : params) in >> p;
    m.field.set_params_flat(params);
    return m;
}

}  // namespace erelifm
