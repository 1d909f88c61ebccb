#pragma once

#include <string>
#include <vector>

#include "erelifm/mlp.hpp"
#include "erelifm/synthbench.hpp"

namespace erelifm {

struct EvalRecord {
    double confidence = 0.0;  // max softmax over the known classes
    int predicted = 0;        // known-class prediction
    int true_label = 0;
    bool is_unseen = false;
};

// fraction of seen records predicted correctly
double closed_acc(const std::vector<EvalRecord>& records);

// threshold-based open-set score: harmonic mean of seen accuracy (correct
// class and confidence >= lambda) and unseen rejection rate (confidence
// < lambda)
double h_score(const std::vector<EvalRecord>& records, double lambda);

// validation closed-set accuracy-at-threshold over a grid of 99 quantile
// points; ties resolve to the smallest lambda
double select_lambda(const std::vector<EvalRecord>& validation);

double accuracy_at_threshold(const std::vector<EvalRecord>& records, double lambda);

// area under the CCR-vs-FPR step curve; thresholds swept over the pooled
// distinct confidence values plus -inf, strict '>' at each threshold
double oscr(const std::vector<EvalRecord>& records);

// Softmax confidence over the first known_classes logits; any extra
// classifier output is excluded.
std::vector<EvalRecord> evaluate_model(const Mlp& model, const std::vector<Sample>& samples,
                                       int known_classes);

void write_confidence_histogram_csv(const std::vector<EvalRecord>& records,
                                    const std::string& path, int bins = 20);

}  // namespace erelifm
