#pragma once

#include <optional>
#include <string>
#include <vector>

#include "erelifm/config.hpp"
#include "erelifm/meta.hpp"
#include "erelifm/metrics.hpp"

namespace erelifm {

struct CellMetrics {
    int split_id = 0;
    uint64_t seed = 0;
    double acc = 0.0;
    double h = 0.0;
    double oscr = 0.0;
    std::optional<double> partition_accuracy;
};

struct RunResult {
    std::vector<CellMetrics> cells;
    std::string metrics_csv;  // full text of the emitted metrics file
};

// Source list of a split with this run's label noise applied.
std::vector<Sample> noisy_source(const ExperimentConfig& cfg, const Split& split,
                                 uint64_t seed);

// Runs one (split, seed) cell end to end in memory. artifacts_dir may be
// empty (no files written).
CellMetrics run_cell(const ExperimentConfig& cfg, const Split& split, uint64_t seed,
                     const std::string& artifacts_dir);

// Full run over every (split, seed): writes metrics.csv, config.json and
// manifest.json under cfg.out_dir.
RunResult cmd_run(const ExperimentConfig& cfg);

// Runs exactly one stage (generate|stage1|cluster|flow|meta|evaluate)
// against stored artifacts under cfg.out_dir. Missing prerequisites
// raise a dependency error naming the absent artifact.
void cmd_stage(const std::string& stage, const ExperimentConfig& cfg);

struct CompareRow {
    std::string metric;
    double mean_delta = 0.0;
    double std_delta = 0.0;
    std::vector<double> per_pair;  // variant - baseline, per (split, seed)
};

// Pairs per-(split, seed) rows of two completed runs and reports deltas.
std::vector<CompareRow> cmd_compare(const ExperimentConfig& baseline,
                                    const ExperimentConfig& variant,
                                    const std::string& report_path);

std::string metrics_csv_text(const ExperimentConfig& cfg,
                             const std::vector<CellMetrics>& cells);

// Runs every named ablation variant plus plain_ce; writes
// <out_dir>/ablation.csv with one summary row per variant.
std::string cmd_ablation(const ExperimentConfig& cfg);

}  // namespace erelifm
