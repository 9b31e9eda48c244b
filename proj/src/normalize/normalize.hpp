#pragma once

#include <Eigen/Dense>

namespace lpfusion::normalize {

// Per-feature mean and standard deviation fitted on training features.
// Population (divide-by-m) convention; constant columns keep std 1 so
// applying the state is always well defined.
struct ZScoreState {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
};

ZScoreState zscore_fit(const Eigen::MatrixXd& features);
Eigen::MatrixXd zscore_apply(const Eigen::MatrixXd& features,
                             const ZScoreState& state);

// Two-sided min-max score normalization: thresholds at the k-th smallest
// and k-th largest training score so that about rho/2 percent of scores
// fall outside on each side, followed by min-max scaling clipped to [0,1].
struct TwoSidedMinMaxState {
  double lower = 0.0;
  double upper = 0.0;
  int rho = 0;
  bool degenerate = false;  // all training scores equal; apply returns 0.5
};

TwoSidedMinMaxState tsmm_fit(const Eigen::VectorXd& scores, int rho);
double tsmm_apply(double score, const TwoSidedMinMaxState& state);
Eigen::VectorXd tsmm_apply(const Eigen::VectorXd& scores,
                           const TwoSidedMinMaxState& state);

}  // namespace lpfusion::normalize
