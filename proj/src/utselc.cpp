#include "erelifm/utselc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "erelifm/finch.hpp"
#include "erelifm/gmm.hpp"

namespace erelifm {

namespace {

std::vector<double> mean_vector(const std::vector<std::vector<double>>& vecs) {
    std::vector<double> m(vecs.front().size(), 0.0);
    for (const auto& v : vecs)
        for (size_t i = 0; i < m.size(); ++i) m[i] += v[i];
    for (auto& x : m) x /= static_cast<double>(vecs.size());
    return m;
}

double scalar_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Project a responsibility-based labeling onto a split that is monotone
// in score (all-clean-below-cut), which enforces the ordering constraint
// mean(clean) < mean(noisy). The cut minimizes disagreement with the
// responsibilities; in the well-separated case they coincide.
std::vector<bool> monotone_project(const std::vector<double>& scores,
                                   const std::vector<bool>& wants_clean) {
    const size_t m = scores.size();
    std::vector<size_t> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // disagreements for cut k: first k (by score) clean, rest noisy
    size_t best_cut = 0, best_cost = 0;
    for (size_t i = 0; i < m; ++i)
        if (wants_clean[order[i]]) ++best_cost;  // cost of cut 0
    size_t cost = best_cost;
    for (size_t k = 1; k <= m; ++k) {
        cost += wants_clean[order[k - 1]] ? static_cast<size_t>(-1) : 1;
        if (cost < best_cost) {
            best_cost = cost;
            best_cut = k;
        }
    }
    std::vector<bool> out(m, false);
    for (size_t i = 0; i < best_cut; ++i) out[order[i]] = true;
    return out;
}

}  // namespace

std::vector<FinchPartition> group_and_cluster(const TrajectoryStore& store,
                                              const std::vector<Sample>& samples) {
    std::map<std::pair<int, int>, std::vector<const Sample*>> groups;
    for (const auto& s : samples)
        groups[{s.domain_id, s.observed_label}].push_back(&s);

    std::vector<FinchPartition> out;
    for (const auto& [key, members] : groups) {
        std::vector<std::vector<double>> trajs;
        trajs.reserve(members.size());
        for (const Sample* s : members) trajs.push_back(store.at(s->id));

        auto parts = finch_first_partition(trajs);
        for (const auto& part : parts) {
            FinchPartition fp;
            fp.domain = key.first;
            fp.label = key.second;
            std::vector<std::vector<double>> member_trajs;
            for (size_t idx : part) {
                fp.member_ids.push_back(members[idx]->id);
                member_trajs.push_back(trajs[idx]);
            }
            fp.mean_trajectory = mean_vector(member_trajs);
            fp.score = scalar_mean(fp.mean_trajectory);
            out.push_back(std::move(fp));
        }
    }
    return out;
}

double partition_score(const std::vector<std::vector<double>>& member_trajs) {
    return scalar_mean(mean_vector(member_trajs));
}

CleanNoisyPartition gmm_split(std::vector<FinchPartition> partitions,
                              const UtselcConfig& cfg) {
    require(!partitions.empty(), "gmm_split needs at least one partition");

    CleanNoisyPartition result;
    result.partitions = std::move(partitions);
    const size_t m = result.partitions.size();
    result.partition_clean.assign(m, true);

    // GMM groups: global, or per source domain
    std::map<int, std::vector<size_t>> groups;
    for (size_t i = 0; i < m; ++i)
        groups[cfg.per_domain ? result.partitions[i].domain : 0].push_back(i);

    for (auto& [dom, idxs] : groups) {
        std::vector<double> scores;
        for (size_t i : idxs) scores.push_back(result.partitions[i].score);
        auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
        if (idxs.size() < 2 || *mx - *mn < 1e-15) {
            std::cerr << "[utselc] degenerate score set (group " << dom
                      << "); assigning everything clean\n";
            result.degenerate = true;
            continue;  // partition_clean already true
        }

        std::vector<bool> wants_clean(idxs.size(), false);
        if (cfg.vector_scores) {
            std::vector<std::vector<double>> vecs;
            for (size_t i : idxs) vecs.push_back(result.partitions[i].mean_trajectory);
            GmmDiag g = fit_gmm_diag(vecs);
            int clean_comp = scalar_mean(g.mean[0]) <= scalar_mean(g.mean[1]) ? 0 : 1;
            for (size_t k = 0; k < idxs.size(); ++k)
                wants_clean[k] = g.responsibility(vecs[k], clean_comp) > 0.5;
        } else {
            Gmm1d g = fit_gmm1d(scores);
            int clean_comp = g.mean[0] <= g.mean[1] ? 0 : 1;
            for (size_t k = 0; k < idxs.size(); ++k)
                wants_clean[k] = g.responsibility(scores[k], clean_comp) > 0.5;
        }

        auto clean = monotone_project(scores, wants_clean);
        for (size_t k = 0; k < idxs.size(); ++k) result.partition_clean[idxs[k]] = clean[k];
    }

    for (size_t i = 0; i < m; ++i) {
        for (int id : result.partitions[i].member_ids) {
            result.assignment[id] = result.partition_clean[i];
            (result.partition_clean[i] ? result.clean_ids : result.noisy_ids).push_back(id);
        }
    }
    std::sort(result.clean_ids.begin(), result.clean_ids.end());
    std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
    return result;
}

CleanNoisyPartition utselc(const TrajectoryStore& store, const std::vector<Sample>& samples,
                           const UtselcConfig& cfg) {
    return gmm_split(group_and_cluster(store, samples), cfg);
}

double evaluate_partition(const CleanNoisyPartition& partition,
                          const std::vector<Sample>& samples) {
    require(!samples.empty(), "evaluate_partition needs samples");
    size_t hit = 0;
    for (const auto& s : samples)
        if (partition.is_assigned_clean(s.id) == s.is_clean()) ++hit;
    return static_cast<double>(hit) / static_cast<double>(samples.size());
}

CleanNoisyPartition baseline_gmm(const TrajectoryStore& store,
                                 const std::vector<Sample>& samples) {
    // one singleton partition per sample: GMM directly on per-sample scores
    std::vector<FinchPartition> parts;
    for (const auto& s : samples) {
        FinchPartition fp;
        fp.domain = s.domain_id;
        fp.label = s.observed_label;
        fp.member_ids = {s.id};
        fp.mean_trajectory = store.at(s.id);
        fp.score = scalar_mean(fp.mean_trajectory);
        parts.push_back(std::move(fp));
    }
    return gmm_split(std::move(parts), {});
}

CleanNoisyPartition baseline_finch(const TrajectoryStore& store,
                                   const std::vector<Sample>& samples) {
    require(!samples.empty(), "baseline_finch needs samples");
    std::vector<std::vector<double>> points;
    std::vector<std::vector<int>> members;  // sample ids per cluster
    for (const auto& s : samples) {
        points.push_back(store.at(s.id));
        members.push_back({s.id});
    }

    // recurse on cluster means until at most two clusters remain
    while (points.size() > 2) {
        auto parts = finch_first_partition(points);
        if (parts.size() == points.size()) break;  // cannot happen for n >= 2
        std::vector<std::vector<double>> new_points;
        std::vector<std::vector<int>> new_members;
        for (const auto& part : parts) {
            std::vector<std::vector<double>> vecs;
            std::vector<int> ids;
            for (size_t idx : part) {
                vecs.push_back(points[idx]);
                ids.insert(ids.end(), members[idx].begin(), members[idx].end());
            }
            new_points.push_back(mean_vector(vecs));
            new_members.push_back(std::move(ids));
        }
        points = std::move(new_points);
        members = std::move(new_members);
    }

    CleanNoisyPartition result;
    int clean_cluster = 0;
    if (points.size() == 2 && scalar_mean(points[1]) < scalar_mean(points[0]))
        clean_cluster = 1;
    for (size_t c = 0; c < points.size(); ++c) {
        FinchPartition fp;
        fp.member_ids = members[c];
        fp.mean_trajectory = points[c];
        fp.score = scalar_mean(points[c]);
        bool clean = points.size() == 1 || static_cast<int>(c) == clean_cluster;
        result.partitions.push_back(std::move(fp));
        result.partition_clean.push_back(clean);
        for (int id : members[c]) {
            result.assignment[id] = clean;
            (clean ? result.clean_ids : result.noisy_ids).push_back(id);
        }
    }
    if (points.size() == 1) result.degenerate = true;
    std::sort(result.clean_ids.begin(), result.clean_ids.end());
    std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
    return result;
}

CleanNoisyPartition read_partition_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CleanNoisyPartition result;
    std::map<size_t, FinchPartition> parts;
    std::map<size_t, bool> part_clean;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("sample_id", 0) == 0) continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        int id = std::stoi(tok);
        std::getline(ss, tok, ',');
        bool clean = tok == "clean";
        std::getline(ss, tok, ',');
        size_t pid = std::stoul(tok);
        std::getline(ss, tok, ',');
        double score = std::stod(tok);
        parts[pid].member_ids.push_back(id);
        parts[pid].score = score;
        part_clean[pid] = clean;
        result.assignment[id] = clean;
        (clean ? result.clean_ids : result.noisy_ids).push_back(id);
    }
    for (auto& [pid, fp] : parts) {
        result.partitions.push_back(std::move(fp));
        result.partition_clean.push_back(part_clean[pid]);
    }
    std::sort(result.clean_ids.begin(), result.clean_ids.end());
    std::sort(result.noisy_ids.begin(), result.noisy_ids.end());
    return result;
}

void write_partition_csv(const CleanNoisyPartition& partition, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "sample_id,assigned,partition_id,partition_score\n";
    out.precision(17);
    // stable order: by sample id
    std::map<int, std::pair<size_t, bool>> rows;
    for (size_t p = 0; p < partition.partitions.size(); ++p)
        for (int id : partition.partitions[p].member_ids)
            rows[id] = {p, partition.partition_clean[p]};
    for (const auto& [id, info] : rows)
        out << id << ',' << (info.second ? "clean" : "noisy") << ',' << info.first << ','
            << partition.partitions[info.first].score << "\n";
}

}  // namespace erelifm
