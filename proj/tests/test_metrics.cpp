#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "erelifm/metrics.hpp"
#include "erelifm/rng.hpp"

using namespace erelifm;

namespace {

EvalRecord rec(double conf, bool correct, bool unseen) {
    EvalRecord r;
    r.confidence = conf;
    r.true_label = 0;
    r.predicted = correct ? 0 : 1;
    r.is_unseen = unseen;
    return r;
}

// Independent OSCR oracle: direct O(n^2) counting at every pooled
// threshold, rectangle rule over the CCR-vs-FPR curve.
double oscr_bruteforce(const std::vector<EvalRecord>& records) {
    std::vector<double> thresholds;
    for (const auto& r : records) thresholds.push_back(r.confidence);
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(-std::numeric_limits<double>::infinity());

    double seen_total = 0, unseen_total = 0;
    for (const auto& r : records) (r.is_unseen ? unseen_total : seen_total) += 1.0;

    double area = 0.0, prev_fpr = 0.0;
    for (double theta : thresholds) {
        double ccr_n = 0, fpr_n = 0;
        for (const auto& r : records) {
            if (r.confidence <= theta) continue;
            if (r.is_unseen)
                fpr_n += 1.0;
            else if (r.predicted == r.true_label)
                ccr_n += 1.0;
        }
        double ccr = ccr_n / seen_total;
        double fpr = fpr_n / unseen_total;
        area += (fpr - prev_fpr) * ccr;
        prev_fpr = fpr;
    }
    return area;
}

std::vector<EvalRecord> random_records(Rng& rng, size_t n) {
    std::vector<EvalRecord> out;
    for (size_t i = 0; i < n; ++i) {
        // two-decimal confidences force plenty of ties
        double conf = std::round(rng.uniform() * 100.0) / 100.0;
        out.push_back(rec(conf, rng.uniform() < 0.6, rng.uniform() < 0.4));
    }
    // guarantee both populations
    out.push_back(rec(0.5, true, false));
    out.push_back(rec(0.5, false, true));
    return out;
}

}  // namespace

TEST_CASE("closed accuracy counts seen records only") {
    std::vector<EvalRecord> rs = {rec(0.9, true, false), rec(0.8, true, false),
                                  rec(0.7, false, false), rec(0.6, true, false),
                                  rec(0.99, false, true)};
    CHECK(closed_acc(rs) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(closed_acc({rec(0.5, true, false)}) == doctest::Approx(1.0));
    CHECK(closed_acc({rec(0.5, false, false)}) == doctest::Approx(0.0));
    CHECK_THROWS(closed_acc({rec(0.5, true, true)}));
}

TEST_CASE("h-score hand values") {
    // 10 seen, 4 correct-and-confident; 10 unseen, 8 rejected
    std::vector<EvalRecord> rs;
    for (int i = 0; i < 4; ++i) rs.push_back(rec(0.9, true, false));
    for (int i = 0; i < 2; ++i) rs.push_back(rec(0.2, true, false));   // below lambda
    for (int i = 0; i < 4; ++i) rs.push_back(rec(0.9, false, false));  // wrong
    for (int i = 0; i < 8; ++i) rs.push_back(rec(0.2, false, true));
    for (int i = 0; i < 2; ++i) rs.push_back(rec(0.9, false, true));
    double h = h_score(rs, 0.5);
    CHECK(h == doctest::Approx(2.0 * 0.4 * 0.8 / 1.2).epsilon(1e-12));

    // both sides zero -> 0, not NaN
    std::vector<EvalRecord> bad = {rec(0.2, true, false), rec(0.9, false, true)};
    CHECK(h_score(bad, 0.5) == doctest::Approx(0.0));

    CHECK_THROWS(h_score(rs, 0.0));
    CHECK_THROWS(h_score(rs, 1.0));
    CHECK_THROWS(h_score({rec(0.5, true, false)}, 0.5));
}

TEST_CASE("accuracy at threshold requires both correctness and confidence") {
    std::vector<EvalRecord> rs = {rec(0.9, true, false), rec(0.4, true, false),
                                  rec(0.9, false, false), rec(0.4, false, false)};
    CHECK(accuracy_at_threshold(rs, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(accuracy_at_threshold(rs, 0.3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS(accuracy_at_threshold({}, 0.5));
}

TEST_CASE("lambda selection maximizes accuracy-at-threshold, ties to smallest") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<EvalRecord> val;
        size_t n = 5 + rng.below(60);
        for (size_t i = 0; i < n; ++i)
            val.push_back(rec(std::round(rng.uniform() * 50.0) / 50.0,
                              rng.uniform() < 0.7, false));
        double chosen = select_lambda(val);

        // oracle: scan the same quantile grid exhaustively
        std::vector<double> confs;
        for (const auto& r : val) confs.push_back(r.confidence);
        std::sort(confs.begin(), confs.end());
        double best_acc = -1.0, best_lambda = 0.0;
        for (int k = 1; k <= 99; ++k) {
            size_t idx = static_cast<size_t>(std::llround(
                k / 100.0 * static_cast<double>(confs.size() - 1)));
            double lam = confs[idx];
            double acc = accuracy_at_threshold(val, lam);
            if (acc > best_acc || (acc == best_acc && lam < best_lambda)) {
                best_acc = acc;
                best_lambda = lam;
            }
        }
        CHECK(chosen == best_lambda);
        CHECK(accuracy_at_threshold(val, chosen) == doctest::Approx(best_acc));
    }
}

TEST_CASE("perfect validation picks the smallest grid lambda") {
    std::vector<EvalRecord> val;
    for (int i = 0; i < 20; ++i)
        val.push_back(rec(0.05 * (i + 1), true, false));
    double lam = select_lambda(val);
    // every record is correct, so lower thresholds only add correct hits
    CHECK(lam == doctest::Approx(0.05).epsilon(1e-12));  // k=1 quantile of 20 points
    CHECK(accuracy_at_threshold(val, lam) >= accuracy_at_threshold(val, 0.9));
}

TEST_CASE("oscr hand cases") {
    // perfect separation and correctness
    std::vector<EvalRecord> sep = {rec(0.9, true, false), rec(0.8, true, false),
                                   rec(0.2, false, true), rec(0.1, false, true)};
    CHECK(oscr(sep) == doctest::Approx(1.0).epsilon(1e-12));

    // seen: 0.9 correct, 0.8 wrong; unseen: 0.7 -> area 0.5
    std::vector<EvalRecord> mixed = {rec(0.9, true, false), rec(0.8, false, false),
                                     rec(0.7, false, true)};
    CHECK(oscr(mixed) == doctest::Approx(0.5).epsilon(1e-12));

    // all seen wrong -> 0
    std::vector<EvalRecord> wrong = {rec(0.9, false, false), rec(0.5, false, true)};
    CHECK(oscr(wrong) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS(oscr({rec(0.5, true, false)}));
}

TEST_CASE("oscr matches the brute-force oracle on random instances") {
    Rng rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        auto rs = random_records(rng, rng.below(49));
        CHECK(oscr(rs) == doctest::Approx(oscr_bruteforce(rs)).epsilon(1e-9));
    }
}

TEST_CASE("oscr never exceeds closed accuracy and ignores monotone rescaling") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        auto rs = random_records(rng, 10 + rng.below(30));
        double base = oscr(rs);
        CHECK(base <= closed_acc(rs) + 1e-12);
        auto scaled = rs;
        for (auto& r : scaled) r.confidence = r.confidence * r.confidence;  // increasing on [0,1]
        CHECK(oscr(scaled) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("evaluate_model restricts the softmax to known classes") {
    // logits = [x0, x1, 100]: the extra output must not leak into confidence
    Mlp model({2, 3});
    for (size_t i = 0; i < model.param_count(); ++i) model.set_param(i, 0.0);
    model.set_param(0, 1.0);  // w(0,0)
    model.set_param(3, 1.0);  // w(1,1)
    model.set_param(model.param_count() - 1, 100.0);  // extra-class bias

    Sample seen;
    seen.features = {2.0, -1.0};
    seen.original_label = 0;
    Sample unseen = seen;
    unseen.original_label = 2;

    auto recs = evaluate_model(model, {seen, unseen}, 2);
    REQUIRE(recs.size() == 2);
    double expect = 1.0 / (1.0 + std::exp(-3.0));  // softmax over [2, -1]
    CHECK(recs[0].predicted == 0);
    CHECK(recs[0].confidence == doctest::Approx(expect).epsilon(1e-12));
    CHECK_FALSE(recs[0].is_unseen);
    CHECK(recs[1].is_unseen);
    CHECK(recs[1].confidence == doctest::Approx(expect).epsilon(1e-12));
}
