#include "erelifm/evidential.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace erelifm {

const std::vector<double>& TrajectoryStore::at(int sample_id) const {
    auto it = trajectories.find(sample_id);
    if (it == trajectories.end())
        throw std::runtime_error("missing trajectory for sample " + std::to_string(sample_id));
    return it->second;
}

void TrajectoryStore::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "sample_id";
    for (int e = 1; e <= epochs; ++e) out << ",l" << e;
    out << "\n";
    out.precision(17);
    for (const auto& [id, traj] : trajectories) {
        out << id;
        for (double v : traj) out << ',' << v;
        out << "\n";
    }
}

TrajectoryStore TrajectoryStore::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    TrajectoryStore store;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("sample_id", 0) == 0) continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        int id = std::stoi(tok);
        std::vector<double> traj;
        while (std::getline(ss, tok, ',')) traj.push_back(std::stod(tok));
        store.epochs = static_cast<int>(traj.size());
        store.trajectories[id] = std::move(traj);
    }
    return store;
}

Matrix features_matrix(const std::vector<Sample>& samples) {
    Matrix m(samples.size(), samples.empty() ? 0 : samples.front().features.size());
    for (size_t r = 0; r < samples.size(); ++r)
        for (size_t c = 0; c < m.cols; ++c) m(r, c) = samples[r].features[c];
    return m;
}

Matrix features_matrix(const std::vector<const Sample*>& samples) {
    Matrix m(samples.size(), samples.empty() ? 0 : samples.front()->features.size());
    for (size_t r = 0; r < samples.size(); ++r)
        for (size_t c = 0; c < m.cols; ++c) m(r, c) = samples[r]->features[c];
    return m;
}

std::vector<int> observed_labels(const std::vector<Sample>& samples) {
    std::vector<int> y(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) y[i] = samples[i].observed_label;
    return y;
}

Stage1Result train_stage1(const std::vector<Sample>& sources, int known_classes,
                          const Stage1Config& cfg, Rng rng) {
    require(!sources.empty(), "stage 1 needs a nonempty source set");
    const size_t feat = sources.front().features.size();

    std::vector<size_t> arch;
    arch.push_back(feat);
    for (size_t h : cfg.hidden) arch.push_back(h);
    arch.push_back(static_cast<size_t>(known_classes));

    Rng init_rng = rng.split("init");
    Rng order_rng = rng.split("order");

    Stage1Result res;
    res.backbone = Mlp::random(arch, init_rng);

    const long steps_per_epoch =
        static_cast<long>((sources.size() + cfg.batch_size - 1) / cfg.batch_size);
    Sgd opt(LrSchedule::cyclic(cfg.lr_min, cfg.lr_max,
                               std::max<long>(2, cfg.cycle_epochs * steps_per_epoch)),
            cfg.momentum);

    Matrix all_feats = features_matrix(sources);
    std::vector<int> all_labels = observed_labels(sources);

    std::vector<size_t> order(sources.size());
    std::iota(order.begin(), order.end(), 0);

    res.store.epochs = cfg.epochs;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        order_rng.shuffle(order);
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(cfg.batch_size)) {
            size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
            Matrix batch(end - start, feat);
            std::vector<int> labels(end - start);
            for (size_t i = start; i < end; ++i) {
                const Sample& s = sources[order[i]];
                for (size_t c = 0; c < feat; ++c) batch(i - start, c) = s.features[c];
                labels[i - start] = s.observed_label;
            }
            Matrix logits = res.backbone.forward(batch);
            LossGrad lg = evidential_loss(logits, labels);
            if (!std::isfinite(lg.loss))
                throw std::runtime_error("non-finite evidential loss at epoch " +
                                         std::to_string(epoch));
            res.backbone.backward(lg.grad);
            opt.step(res.backbone);
        }

        // separate evaluation pass; trajectories do not depend on batch order
        Matrix logits = res.backbone.forward_eval(all_feats);
        auto losses = evidential_loss_per_sample(logits, all_labels);
        double mean = 0.0;
        for (size_t i = 0; i < sources.size(); ++i) {
            res.store.trajectories[sources[i].id].push_back(losses[i]);
            mean += losses[i];
        }
        res.epoch_mean_loss.push_back(mean / static_cast<double>(sources.size()));
    }
    return res;
}

}  // namespace erelifm
