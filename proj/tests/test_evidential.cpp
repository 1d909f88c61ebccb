#include <doctest.h>

#include <cstdio>

#include "erelifm/evidential.hpp"

using namespace erelifm;

namespace {

std::vector<Sample> separable_source(int domains, int classes, int per_cell) {
    std::vector<Sample> out;
    int id = 0;
    for (int d = 0; d < domains; ++d)
        for (int c = 0; c < classes; ++c)
            for (int i = 0; i < per_cell; ++i) {
                Sample s;
                s.id = id++;
                s.domain_id = d;
                s.observed_label = s.original_label = c;
                s.features = {static_cast<double>(c) * 3.0 + 0.01 * i,
                              static_cast<double>(d) * 0.5};
                out.push_back(s);
            }
    return out;
}

}  // namespace

TEST_CASE("trajectories have length N_e for every sample") {
    auto src = separable_source(2, 3, 8);
    Stage1Config cfg;
    auto res = train_stage1(src, 3, cfg, Rng(1));
    CHECK(res.store.epochs == 10);
    CHECK(res.store.trajectories.size() == src.size());
    for (const auto& s : src) {
        const auto& t = res.store.at(s.id);
        CHECK(t.size() == 10);
        for (double v : t) {
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
        }
    }
    CHECK_THROWS(res.store.at(999999));
}

TEST_CASE("separable clean data trains down") {
    auto src = separable_source(2, 3, 10);
    Stage1Config cfg;
    auto res = train_stage1(src, 3, cfg, Rng(2));
    CHECK(res.epoch_mean_loss.back() < res.epoch_mean_loss.front());
}

TEST_CASE("same seed gives identical trajectory stores") {
    auto src = separable_source(2, 2, 6);
    Stage1Config cfg;
    auto a = train_stage1(src, 2, cfg, Rng(7));
    auto b = train_stage1(src, 2, cfg, Rng(7));
    CHECK(a.store.trajectories == b.store.trajectories);
    auto c = train_stage1(src, 2, cfg, Rng(8));
    CHECK(a.store.trajectories != c.store.trajectories);
}

TEST_CASE("trajectory store csv round trip") {
    TrajectoryStore s;
    s.epochs = 3;
    s.trajectories[4] = {1.0, 0.5, 0.25};
    s.trajectories[9] = {2.0, 1.5, 1.0};
    s.write_csv("traj_roundtrip.tmp");
    auto back = TrajectoryStore::read_csv("traj_roundtrip.tmp");
    CHECK(back.epochs == 3);
    CHECK(back.trajectories == s.trajectories);
    std::remove("traj_roundtrip.tmp");
}

TEST_CASE("features matrix and labels helpers") {
    auto src = separable_source(1, 2, 2);
    Matrix f = features_matrix(src);
    CHECK(f.rows == src.size());
    CHECK(f.cols == 2);
    CHECK(f(1, 0) == src[1].features[0]);
    auto labels = observed_labels(src);
    CHECK(labels.size() == src.size());
    CHECK(labels[3] == src[3].observed_label);
}
