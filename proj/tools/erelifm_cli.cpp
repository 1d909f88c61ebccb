#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "erelifm/pipeline.hpp"

using namespace erelifm;

namespace {

ExperimentConfig load_config(const std::string& config_path) {
    if (config_path.empty()) return ExperimentConfig{};
    return ExperimentConfig::from_json_file(config_path);
}

void apply_overrides(ExperimentConfig& cfg, const std::string& out,
                     const std::string& variant, long seed) {
    if (!out.empty()) cfg.out_dir = out;
    if (!variant.empty()) cfg.variant = variant;
    if (seed >= 0) cfg.seeds = {static_cast<uint64_t>(seed)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"erelifm: open-set domain generalization under label noise"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global flags after the subcommand too

    std::string config_path, out_dir, variant;
    long seed = -1;
    app.add_option("--config", config_path, "experiment config (JSON)");
    app.add_option("--seed", seed, "run a single seed instead of the configured list");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--variant", variant, "pipeline variant (full, plain_ce, ablations)");

    auto* run = app.add_subcommand("run", "full pipeline over every (split, seed)");

    auto* ablation =
        app.add_subcommand("ablation", "run the full ablation matrix and summarize per variant");

    std::string stage_name;
    auto* stage = app.add_subcommand("stage", "run one pipeline stage against stored artifacts");
    stage->add_option("name", stage_name, "generate|stage1|cluster|flow|meta|evaluate")
        ->required();

    std::string baseline_dir, report_path;
    auto* compare = app.add_subcommand("compare", "pair two completed runs and report metric deltas");
    compare->add_option("--baseline", baseline_dir, "out dir of the baseline run")->required();
    compare->add_option("--report", report_path, "where to write the delta CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = load_config(config_path);
        apply_overrides(cfg, out_dir, variant, seed);

        if (run->parsed()) {
            RunResult res = cmd_run(cfg);
            std::cout << res.metrics_csv;
        } else if (ablation->parsed()) {
            std::cout << cmd_ablation(cfg);
        } else if (stage->parsed()) {
            cmd_stage(stage_name, cfg);
            std::cout << "stage " << stage_name << " done (" << cfg.out_dir << ")\n";
        } else if (compare->parsed()) {
            ExperimentConfig base = cfg;
            base.out_dir = baseline_dir;
            auto rows = cmd_compare(base, cfg, report_path);
            std::cout << "metric,mean_delta,std_delta\n";
            for (const auto& r : rows)
                std::cout << r.metric << ',' << r.mean_delta << ',' << r.std_delta << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
