#pragma once

#include <map>
#include <string>
#include <vector>

#include "erelifm/losses.hpp"
#include "erelifm/mlp.hpp"
#include "erelifm/optim.hpp"
#include "erelifm/synthbench.hpp"

namespace erelifm {

// Per-sample evidential loss recorded once per epoch during stage-1
// training. Keyed by sample id; std::map keeps exports deterministic.
struct TrajectoryStore {
    int epochs = 0;
    std::map<int, std::vector<double>> trajectories;

    const std::vector<double>& at(int sample_id) const;
    void write_csv(const std::string& path) const;
    static TrajectoryStore read_csv(const std::string& path);
};

struct Stage1Config {
    int epochs = 10;  // N_e
    int batch_size = 32;
    std::vector<size_t> hidden = {64, 64};
    double lr_min = 1e-3;
    double lr_max = 0.2;
    int cycle_epochs = 2;  // cyclic LR period in epochs
    double momentum = 0.9;
};

struct Stage1Result {
    Mlp backbone;  // known_classes outputs
    TrajectoryStore store;
    std::vector<double> epoch_mean_loss;
};

// Trains the evidential backbone on the (noisy) source set with a cyclic
// LR and records every sample's loss after each epoch in a separate
// evaluation pass.
Stage1Result train_stage1(const std::vector<Sample>& sources, int known_classes,
                          const Stage1Config& cfg, Rng rng);

// Batch assembly helpers shared across training loops.
Matrix features_matrix(const std::vector<Sample>& samples);
Matrix features_matrix(const std::vector<const Sample*>& samples);
std::vector<int> observed_labels(const std::vector<Sample>& samples);

}  // namespace erelifm
