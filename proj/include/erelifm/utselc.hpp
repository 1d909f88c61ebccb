#pragma once

#include <map>
#include <string>
#include <vector>

#include "erelifm/evidential.hpp"
#include "erelifm/synthbench.hpp"

namespace erelifm {

struct FinchPartition {
    int domain = 0;
    int label = 0;  // observed label of the group
    std::vector<int> member_ids;
    std::vector<double> mean_trajectory;
    double score = 0.0;  // scalar mean of the mean trajectory
};

struct UtselcConfig {
    bool per_domain = false;    // one GMM per source domain instead of global
    bool vector_scores = false; // diagonal GMM over mean trajectories
};

struct CleanNoisyPartition {
    std::vector<int> clean_ids;
    std::vector<int> noisy_ids;
    std::map<int, bool> assignment;  // sample id -> clean?
    std::vector<FinchPartition> partitions;
    std::vector<bool> partition_clean;  // parallel to partitions
    bool degenerate = false;

    bool is_assigned_clean(int sample_id) const { return assignment.at(sample_id); }
};

// FINCH per (domain, observed label) group over loss trajectories.
// Groups with fewer than 2 samples yield a single singleton partition.
std::vector<FinchPartition> group_and_cluster(const TrajectoryStore& store,
                                              const std::vector<Sample>& samples);

// mean over members then mean over the trajectory axis
double partition_score(const std::vector<std::vector<double>>& member_trajs);

// 2-component GMM over partition scores; the lower-mean side is clean.
// All-identical scores degrade to everything-clean with a warning.
CleanNoisyPartition gmm_split(std::vector<FinchPartition> partitions,
                              const UtselcConfig& cfg = {});

// full UTS-ELC
CleanNoisyPartition utselc(const TrajectoryStore& store, const std::vector<Sample>& samples,
                           const UtselcConfig& cfg = {});

// fraction of samples whose clean/noisy assignment matches the hidden flag
double evaluate_partition(const CleanNoisyPartition& partition,
                          const std::vector<Sample>& samples);

// Single-stage baselines used for the clustering comparison.
CleanNoisyPartition baseline_gmm(const TrajectoryStore& store,
                                 const std::vector<Sample>& samples);
CleanNoisyPartition baseline_finch(const TrajectoryStore& store,
                                   const std::vector<Sample>& samples);

// sample_id, assigned {clean|noisy}, partition_id, partition_score
void write_partition_csv(const CleanNoisyPartition& partition, const std::string& path);
CleanNoisyPartition read_partition_csv(const std::string& path);

}  // namespace erelifm
