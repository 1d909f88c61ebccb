#include "erelifm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;

namespace erelifm {

namespace {

Rng cell_rng(uint64_t seed, int split_id) {
    return Rng(seed).split("cell", static_cast<uint64_t>(split_id));
}

std::string cell_dir_name(int split_id, uint64_t seed) {
    return "cell_d" + std::to_string(split_id) + "_s" + std::to_string(seed);
}

void stamp_config_hash(const std::string& path, const std::string& hash) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    in.close();
    std::ofstream out(path);
    out << "# config=" << hash << "\n" << ss.str();
}

void check_config_hash(const std::string& path, const std::string& hash) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("missing prerequisite artifact: " + path);
    std::string first;
    std::getline(in, first);
    if (first.rfind("# config=", 0) != 0 || first.substr(9) != hash)
        throw std::runtime_error("config hash mismatch on artifact: " + path);
}

void require_artifact(const std::string& path, const std::string& hash) {
    if (!fs::exists(path))
        throw std::runtime_error("missing prerequisite artifact: " + path);
    check_config_hash(path, hash);
}

std::vector<Sample> clean_subset(const std::vector<Sample>& source,
                                 const CleanNoisyPartition& partition) {
    std::vector<Sample> out;
    for (const auto& s : source)
        if (partition.is_assigned_clean(s.id)) out.push_back(s);
    return out;
}

std::vector<int> source_domain_ids(const std::vector<Sample>& source) {
    std::vector<int> ids;
    for (const auto& s : source)
        if (std::find(ids.begin(), ids.end(), s.domain_id) == ids.end())
            ids.push_back(s.domain_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

// 10% stratified holdout (by observed label) used for lambda selection
std::vector<Sample> validation_subset(const std::vector<Sample>& pool, Rng rng) {
    std::map<int, std::vector<const Sample*>> by_class;
    for (const auto& s : pool) by_class[s.observed_label].push_back(&s);
    std::vector<Sample> out;
    for (auto& [label, members] : by_class) {
        Rng r = rng.split("class", static_cast<uint64_t>(label));
        std::vector<size_t> order(members.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        r.shuffle(order);
        size_t take = std::max<size_t>(1, (members.size() + 9) / 10);
        for (size_t i = 0; i < take; ++i) out.push_back(*members[order[i]]);
    }
    return out;
}

double fmt_or(const std::optional<double>& v) { return v ? *v : -1.0; }

}  // namespace

std::vector<Sample> noisy_source(const ExperimentConfig& cfg, const Split& split,
                                 uint64_t seed) {
    std::vector<Sample> source = split.source;
    Rng rng = cell_rng(seed, split.test_domain).split("noise");
    if (cfg.noise_kind == "symmetric")
        inject_symmetric_noise(source, cfg.bench.known_classes, cfg.noise_ratio, rng);
    else
        inject_asymmetric_noise(source, cfg.bench.known_classes, cfg.noise_ratio, rng);
    return source;
}

CellMetrics run_cell(const ExperimentConfig& raw_cfg, const Split& split, uint64_t seed,
                     const std::string& artifacts_dir) {
    ExperimentConfig cfg = raw_cfg;
    cfg.apply_variant();
    const std::string hash = raw_cfg.hash();
    const bool write = !artifacts_dir.empty();
    if (write) fs::create_directories(artifacts_dir);
    auto stamp = [&](const std::string& name) {
        stamp_config_hash(artifacts_dir + "/" + name, hash);
    };

    Rng cell = cell_rng(seed, split.test_domain);
    Split work = split;
    work.source = noisy_source(cfg, split, seed);

    CellMetrics result;
    result.split_id = split.test_domain;
    result.seed = seed;

    Mlp model;
    std::vector<Sample> lambda_pool;

    if (cfg.variant == "plain_ce") {
        model = train_plain_ce(work.source, split.known_classes, cfg.meta,
                               cell.split("meta"));
        lambda_pool = work.source;
    } else {
        auto stage1 = train_stage1(work.source, split.known_classes, cfg.stage1,
                                   cell.split("stage1"));
        if (write) {
            stage1.store.write_csv(artifacts_dir + "/trajectories.csv");
            stamp("trajectories.csv");
        }

        auto partition = utselc(stage1.store, work.source, cfg.cluster);
        result.partition_accuracy = evaluate_partition(partition, work.source);
        if (write) {
            write_partition_csv(partition, artifacts_dir + "/partition.csv");
            stamp("partition.csv");
        }

        FlowModel flow;
        bool have_flow = false;
        if (cfg.needs_flow()) {
            auto clean = clean_subset(work.source, partition);
            FlowConfig fc = cfg.flow_config(source_domain_ids(work.source));
            Rng flow_rng = cell.split("flow");
            Rng pair_rng = flow_rng.split("pairs");
            auto pairs = build_residual_pairs(clean, fc, pair_rng);
            Rng init_rng = flow_rng.split("init");
            flow = FlowModel::create(fc, init_rng);
            train_flow(flow, pairs, flow_rng.split("train"));
            have_flow = true;
            if (write) {
                flow.save(artifacts_dir + "/flow.model");
                stamp("flow.model");
                write_coverage_csv(pairs, artifacts_dir + "/coverage.csv");
                stamp("coverage.csv");
            }
        }

        auto meta = train_erelifm(work, partition, have_flow ? &flow : nullptr, cfg.meta,
                                  cell.split("meta"));
        model = std::move(meta.backbone);
        if (write) {
            meta.log.write_csv(artifacts_dir + "/runlog.csv");
            stamp("runlog.csv");
        }
        lambda_pool = clean_subset(work.source, partition);
        if (lambda_pool.empty()) lambda_pool = work.source;
    }

    if (write) {
        model.save(artifacts_dir + "/backbone.model");
        stamp("backbone.model");
    }

    auto val = validation_subset(lambda_pool, cell.split("val"));
    auto val_records = evaluate_model(model, val, split.known_classes);
    double lambda = std::clamp(select_lambda(val_records), 1e-9, 1.0 - 1e-9);

    auto records = evaluate_model(model, split.test, split.known_classes);
    result.acc = closed_acc(records);
    result.h = h_score(records, lambda);
    result.oscr = oscr(records);
    if (write) {
        write_confidence_histogram_csv(records, artifacts_dir + "/confidences.csv");
        stamp("confidences.csv");
    }
    return result;
}

std::string metrics_csv_text(const ExperimentConfig& cfg,
                             const std::vector<CellMetrics>& cells) {
    std::ostringstream out;
    out.precision(17);
    out << "# config=" << cfg.hash() << "\n";
    out << "split,seed,noise_kind,noise_ratio,variant,acc,h_score,oscr,partition_accuracy\n";

    auto row = [&](const std::string& split, const std::string& seed, double acc, double h,
                   double o, double pa) {
        out << split << ',' << seed << ',' << cfg.noise_kind << ',' << cfg.noise_ratio
            << ',' << cfg.variant << ',' << acc << ',' << h << ',' << o << ',';
        if (pa >= 0.0) out << pa;
        out << "\n";
    };

    std::map<int, std::vector<const CellMetrics*>> by_split;
    for (const auto& c : cells) by_split[c.split_id].push_back(&c);

    for (const auto& c : cells)
        row(std::to_string(c.split_id), std::to_string(c.seed), c.acc, c.h, c.oscr,
            fmt_or(c.partition_accuracy));

    // per-split averages, then the overall average of those
    double ga = 0, gh = 0, go = 0, gp = 0;
    size_t gp_n = 0;
    for (const auto& [split, list] : by_split) {
        double a = 0, h = 0, o = 0, p = 0;
        size_t pn = 0;
        for (const auto* c : list) {
            a += c->acc;
            h += c->h;
            o += c->oscr;
            if (c->partition_accuracy) {
                p += *c->partition_accuracy;
                ++pn;
            }
        }
        double n = static_cast<double>(list.size());
        row(std::to_string(split), "avg", a / n, h / n, o / n,
            pn ? p / static_cast<double>(pn) : -1.0);
        ga += a / n;
        gh += h / n;
        go += o / n;
        if (pn) {
            gp += p / static_cast<double>(pn);
            ++gp_n;
        }
    }
    double ns = static_cast<double>(by_split.size());
    row("avg", "avg", ga / ns, gh / ns, go / ns,
        gp_n ? gp / static_cast<double>(gp_n) : -1.0);
    return out.str();
}

RunResult cmd_run(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::string hash = cfg.hash();
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream out(cfg.out_dir + "/config.json");
        out << cfg.to_json_text() << "\n";
    }

    Dataset dataset = generate(cfg.bench);
    write_dataset_csv(dataset, cfg.out_dir + "/dataset.csv");
    stamp_config_hash(cfg.out_dir + "/dataset.csv", hash);
    auto splits = make_splits(dataset);

    RunResult result;
    for (const auto& split : splits)
        for (uint64_t seed : cfg.seeds) {
            std::string dir = cfg.out_dir + "/" + cell_dir_name(split.test_domain, seed);
            result.cells.push_back(run_cell(cfg, split, seed, dir));
        }

    result.metrics_csv = metrics_csv_text(cfg, result.cells);
    {
        std::ofstream out(cfg.out_dir + "/metrics.csv");
        out << result.metrics_csv;
    }

    // manifest: every artifact with its checksum
    nlohmann::json manifest;
    manifest["config_hash"] = hash;
    nlohmann::json arts = nlohmann::json::array();
    std::vector<std::string> paths;
    for (const auto& entry : fs::recursive_directory_iterator(cfg.out_dir))
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
            paths.push_back(fs::relative(entry.path(), cfg.out_dir).string());
    std::sort(paths.begin(), paths.end());
    for (const auto& rel : paths) {
        std::ifstream in(cfg.out_dir + "/" + rel, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        arts.push_back({{"path", rel}, {"checksum", fnv1a_hex(ss.str())}});
    }
    manifest["artifacts"] = arts;
    {
        std::ofstream out(cfg.out_dir + "/manifest.json");
        out << manifest.dump(2) << "\n";
    }
    return result;
}

void cmd_stage(const std::string& stage, const ExperimentConfig& cfg) {
    cfg.validate();
    const std::string hash = cfg.hash();
    fs::create_directories(cfg.out_dir);

    static const std::vector<std::string> known = {"generate", "stage1", "cluster",
                                                   "flow",     "meta",   "evaluate"};
    if (std::find(known.begin(), known.end(), stage) == known.end())
        throw std::invalid_argument("unknown stage: " + stage);

    if (stage == "generate") {
        Dataset dataset = generate(cfg.bench);
        write_dataset_csv(dataset, cfg.out_dir + "/dataset.csv");
        stamp_config_hash(cfg.out_dir + "/dataset.csv", hash);
        return;
    }

    require_artifact(cfg.out_dir + "/dataset.csv", hash);
    Dataset dataset = read_dataset_csv(cfg.out_dir + "/dataset.csv", cfg.bench);
    auto splits = make_splits(dataset);

    ExperimentConfig applied = cfg;
    applied.apply_variant();

    std::vector<CellMetrics> cells;
    for (const auto& split : splits)
        for (uint64_t seed : cfg.seeds) {
            const std::string dir =
                cfg.out_dir + "/" + cell_dir_name(split.test_domain, seed);
            fs::create_directories(dir);
            auto stamp = [&](const std::string& name) {
                stamp_config_hash(dir + "/" + name, hash);
            };
            Rng cell = cell_rng(seed, split.test_domain);
            Split work = split;
            work.source = noisy_source(cfg, split, seed);

            if (stage == "stage1") {
                auto stage1 = train_stage1(work.source, split.known_classes, cfg.stage1,
                                           cell.split("stage1"));
                stage1.store.write_csv(dir + "/trajectories.csv");
                stamp("trajectories.csv");
            } else if (stage == "cluster") {
                require_artifact(dir + "/trajectories.csv", hash);
                auto store = TrajectoryStore::read_csv(dir + "/trajectories.csv");
                auto partition = utselc(store, work.source, cfg.cluster);
                write_partition_csv(partition, dir + "/partition.csv");
                stamp("partition.csv");
            } else if (stage == "flow") {
                if (!applied.needs_flow())
                    throw std::runtime_error("variant " + cfg.variant +
                                             " does not use the flow stage");
                require_artifact(dir + "/partition.csv", hash);
                auto partition = read_partition_csv(dir + "/partition.csv");
                auto clean = clean_subset(work.source, partition);
                FlowConfig fc = cfg.flow_config(source_domain_ids(work.source));
                Rng flow_rng = cell.split("flow");
                Rng pair_rng = flow_rng.split("pairs");
                auto pairs = build_residual_pairs(clean, fc, pair_rng);
                Rng init_rng = flow_rng.split("init");
                FlowModel flow = FlowModel::create(fc, init_rng);
                train_flow(flow, pairs, flow_rng.split("train"));
                flow.save(dir + "/flow.model");
                stamp("flow.model");
                write_coverage_csv(pairs, dir + "/coverage.csv");
                stamp("coverage.csv");
            } else if (stage == "meta") {
                Mlp model;
                if (cfg.variant == "plain_ce") {
                    model = train_plain_ce(work.source, split.known_classes, applied.meta,
                                           cell.split("meta"));
                } else {
                    require_artifact(dir + "/partition.csv", hash);
                    auto partition = read_partition_csv(dir + "/partition.csv");
                    FlowModel flow;
                    bool have_flow = false;
                    if (applied.needs_flow()) {
                        require_artifact(dir + "/flow.model", hash);
                        flow = FlowModel::load(dir + "/flow.model");
                        have_flow = true;
                    }
                    auto meta = train_erelifm(work, partition,
                                              have_flow ? &flow : nullptr, applied.meta,
                                              cell.split("meta"));
                    model = std::move(meta.backbone);
                    meta.log.write_csv(dir + "/runlog.csv");
                    stamp("runlog.csv");
                }
                model.save(dir + "/backbone.model");
                stamp("backbone.model");
            } else if (stage == "evaluate") {
                require_artifact(dir + "/backbone.model", hash);
                Mlp model = Mlp::load(dir + "/backbone.model");

                CellMetrics result;
                result.split_id = split.test_domain;
                result.seed = seed;
                std::vector<Sample> lambda_pool = work.source;
                if (cfg.variant != "plain_ce") {
                    require_artifact(dir + "/partition.csv", hash);
                    auto partition = read_partition_csv(dir + "/partition.csv");
                    result.partition_accuracy = evaluate_partition(partition, work.source);
                    auto clean = clean_subset(work.source, partition);
                    if (!clean.empty()) lambda_pool = clean;
                }
                auto val = validation_subset(lambda_pool, cell.split("val"));
                auto val_records = evaluate_model(model, val, split.known_classes);
                double lambda = std::clamp(select_lambda(val_records), 1e-9, 1.0 - 1e-9);
                auto records = evaluate_model(model, split.test, split.known_classes);
                result.acc = closed_acc(records);
                result.h = h_score(records, lambda);
                result.oscr = oscr(records);
                write_confidence_histogram_csv(records, dir + "/confidences.csv");
                stamp("confidences.csv");
                cells.push_back(result);
            }
        }

    if (stage == "evaluate") {
        std::ofstream out(cfg.out_dir + "/metrics.csv");
        out << metrics_csv_text(cfg, cells);
    }
}

std::string cmd_ablation(const ExperimentConfig& cfg) {
    std::vector<std::string> names = ablation_variants();
    names.push_back("plain_ce");
    fs::create_directories(cfg.out_dir);

    std::ostringstream out;
    out.precision(17);
    out << "variant,acc,h_score,oscr\n";
    for (const auto& name : names) {
        ExperimentConfig vc = cfg;
        vc.variant = name;
        vc.out_dir = cfg.out_dir + "/" + name;
        RunResult res = cmd_run(vc);
        double a = 0, h = 0, o = 0;
        for (const auto& c : res.cells) {
            a += c.acc;
            h += c.h;
            o += c.oscr;
        }
        double n = static_cast<double>(res.cells.size());
        out << name << ',' << a / n << ',' << h / n << ',' << o / n << "\n";
    }
    std::ofstream file(cfg.out_dir + "/ablation.csv");
    file << out.str();
    return out.str();
}

namespace {

struct MetricsTable {
    // (split, seed) -> [acc, h, oscr]
    std::map<std::pair<std::string, std::string>, std::array<double, 3>> rows;
};

MetricsTable read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing metrics file: " + path);
    MetricsTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("split,", 0) == 0) continue;
        std::stringstream ss(line);
        std::vector<std::string> cols;
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
        if (cols.size() < 8 || cols[0] == "avg" || cols[1] == "avg") continue;
        t.rows[{cols[0], cols[1]}] = {std::stod(cols[5]), std::stod(cols[6]),
                                      std::stod(cols[7])};
    }
    return t;
}

}  // namespace

std::vector<CompareRow> cmd_compare(const ExperimentConfig& baseline,
                                    const ExperimentConfig& variant,
                                    const std::string& report_path) {
    MetricsTable base = read_metrics_csv(baseline.out_dir + "/metrics.csv");
    MetricsTable var = read_metrics_csv(variant.out_dir + "/metrics.csv");
    if (base.rows.size() != var.rows.size())
        throw std::runtime_error("mismatched experiment grids");
    for (const auto& [key, _] : base.rows)
        if (!var.rows.count(key))
            throw std::runtime_error("mismatched experiment grids: missing (" + key.first +
                                     ", " + key.second + ")");

    const char* names[3] = {"acc", "h_score", "oscr"};
    std::vector<CompareRow> report(3);
    for (int m = 0; m < 3; ++m) {
        report[m].metric = names[m];
        for (const auto& [key, vals] : base.rows)
            report[m].per_pair.push_back(var.rows.at(key)[static_cast<size_t>(m)] -
                                         vals[static_cast<size_t>(m)]);
        double mean = 0.0;
        for (double d : report[m].per_pair) mean += d;
        mean /= static_cast<double>(report[m].per_pair.size());
        double var_acc = 0.0;
        for (double d : report[m].per_pair) var_acc += (d - mean) * (d - mean);
        report[m].mean_delta = mean;
        report[m].std_delta =
            std::sqrt(var_acc / static_cast<double>(report[m].per_pair.size()));
    }

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out.precision(17);
        out << "metric,mean_delta,std_delta,n_pairs\n";
        for (const auto& r : report)
            out << r.metric << ',' << r.mean_delta << ',' << r.std_delta << ','
                << r.per_pair.size() << "\n";
    }
    return report;
}

}  // namespace erelifm
