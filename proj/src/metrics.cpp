#include "erelifm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "erelifm/evidential.hpp"
#include "erelifm/losses.hpp"

namespace erelifm {

double closed_acc(const std::vector<EvalRecord>& records) {
    size_t seen = 0, correct = 0;
    for (const auto& r : records) {
        if (r.is_unseen) continue;
        ++seen;
        if (r.predicted == r.true_label) ++correct;
    }
    require(seen > 0, "closed accuracy undefined without seen records");
    return static_cast<double>(correct) / static_cast<double>(seen);
}

double h_score(const std::vector<EvalRecord>& records, double lambda) {
    require(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0, 1)");
    size_t seen = 0, seen_ok = 0, unseen = 0, unseen_ok = 0;
    for (const auto& r : records) {
        if (r.is_unseen) {
            ++unseen;
            if (r.confidence < lambda) ++unseen_ok;
        } else {
            ++seen;
            if (r.predicted == r.true_label && r.confidence >= lambda) ++seen_ok;
        }
    }
    require(seen > 0 && unseen > 0, "h-score needs both seen and unseen records");
    double acc_k = static_cast<double>(seen_ok) / static_cast<double>(seen);
    double acc_u = static_cast<double>(unseen_ok) / static_cast<double>(unseen);
    if (acc_k + acc_u == 0.0) return 0.0;
    return 2.0 * acc_k * acc_u / (acc_k + acc_u);
}

double accuracy_at_threshold(const std::vector<EvalRecord>& records, double lambda) {
    require(!records.empty(), "accuracy undefined on empty records");
    size_t ok = 0;
    for (const auto& r : records)
        if (r.predicted == r.true_label && r.confidence >= lambda) ++ok;
    return static_cast<double>(ok) / static_cast<double>(records.size());
}

double select_lambda(const std::vector<EvalRecord>& validation) {
    require(!validation.empty(), "lambda selection needs validation records");
    std::vector<double> confs;
    confs.reserve(validation.size());
    for (const auto& r : validation) confs.push_back(r.confidence);
    std::sort(confs.begin(), confs.end());

    double best_lambda = 0.0, best_acc = -1.0;
    for (int k = 1; k <= 99; ++k) {
        size_t idx = static_cast<size_t>(
            std::llround(static_cast<double>(k) / 100.0 *
                         static_cast<double>(confs.size() - 1)));
        double lambda = confs[idx];
        double acc = accuracy_at_threshold(validation, lambda);
        if (acc > best_acc || (acc == best_acc && lambda < best_lambda)) {
            best_acc = acc;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

double oscr(const std::vector<EvalRecord>& records) {
    size_t seen_total = 0, unseen_total = 0;
    for (const auto& r : records) (r.is_unseen ? unseen_total : seen_total)++;
    require(seen_total > 0 && unseen_total > 0, "oscr needs both seen and unseen records");

    // descending-sorted confidences of seen-correct and unseen records
    std::vector<double> correct_conf, unseen_conf, thresholds;
    thresholds.reserve(records.size());
    for (const auto& r : records) {
        thresholds.push_back(r.confidence);
        if (r.is_unseen)
            unseen_conf.push_back(r.confidence);
        else if (r.predicted == r.true_label)
            correct_conf.push_back(r.confidence);
    }
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(-std::numeric_limits<double>::infinity());
    std::sort(correct_conf.begin(), correct_conf.end(), std::greater<>());
    std::sort(unseen_conf.begin(), unseen_conf.end(), std::greater<>());

    double area = 0.0, prev_fpr = 0.0;
    size_t ci = 0, ui = 0;
    for (double theta : thresholds) {
        while (ci < correct_conf.size() && correct_conf[ci] > theta) ++ci;
        while (ui < unseen_conf.size() && unseen_conf[ui] > theta) ++ui;
        double ccr = static_cast<double>(ci) / static_cast<double>(seen_total);
        double fpr = static_cast<double>(ui) / static_cast<double>(unseen_total);
        area += (fpr - prev_fpr) * ccr;
        prev_fpr = fpr;
    }
    return area;
}

std::vector<EvalRecord> evaluate_model(const Mlp& model, const std::vector<Sample>& samples,
                                       int known_classes) {
    Matrix logits = model.forward_eval(features_matrix(samples));
    require(logits.cols >= static_cast<size_t>(known_classes),
            "model has fewer outputs than known classes");

    // softmax restricted to the known-class logits
    Matrix known(logits.rows, static_cast<size_t>(known_classes));
    for (size_t r = 0; r < logits.rows; ++r)
        for (int c = 0; c < known_classes; ++c)
            known(r, static_cast<size_t>(c)) = logits(r, static_cast<size_t>(c));
    Matrix probs = softmax(known);

    std::vector<EvalRecord> out(samples.size());
    for (size_t r = 0; r < samples.size(); ++r) {
        int best = 0;
        for (int c = 1; c < known_classes; ++c)
            if (probs(r, static_cast<size_t>(c)) > probs(r, static_cast<size_t>(best)))
                best = c;
        out[r].predicted = best;
        out[r].confidence = probs(r, static_cast<size_t>(best));
        out[r].true_label = samples[r].original_label;
        out[r].is_unseen = samples[r].original_label >= known_classes;
    }
    return out;
}

void write_confidence_histogram_csv(const std::vector<EvalRecord>& records,
                                    const std::string& path, int bins) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    std::vector<size_t> seen(static_cast<size_t>(bins), 0), unseen(static_cast<size_t>(bins), 0);
    for (const auto& r : records) {
        int b = std::min(bins - 1, static_cast<int>(r.confidence * bins));
        (r.is_unseen ? unseen : seen)[static_cast<size_t>(b)]++;
    }
    out << "bin_lo,bin_hi,seen_count,unseen_count\n";
    for (int b = 0; b < bins; ++b)
        out << static_cast<double>(b) / bins << ',' << static_cast<double>(b + 1) / bins
            << ',' << seen[static_cast<size_t>(b)] << ',' << unseen[static_cast<size_t>(b)]
            << "\n";
}

}  // namespace erelifm
