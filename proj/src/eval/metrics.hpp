#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace lpfusion::eval {

// Area under the ROC curve as the Mann-Whitney rank statistic: the
// fraction of (positive, negative) pairs ordered correctly, ties counting
// one half.
double auc(const Eigen::VectorXd& positive_scores,
           const Eigen::VectorXd& negative_scores);

// Geometric mean of the per-class accuracies,
// sqrt(tp/(tp+fn) * tn/(tn+fp)).
double gmean(std::int64_t tp, std::int64_t fn, std::int64_t tn,
             std::int64_t fp);

}  // namespace lpfusion::eval
