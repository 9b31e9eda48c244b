#pragma once

#include <Eigen/Dense>

namespace lpfusion::learners {

// One-class Gaussian Process detector: regression of the constant target 1
// on the training set. The novelty score of a point is one minus its
// predictive mean, 1 - k(x)^T (K + jitter I)^{-1} 1, clamped at zero.
class GpModel {
 public:
  GpModel() = default;
  GpModel(Eigen::MatrixXd train, double sigma, double initial_jitter);

  double score(const Eigen::VectorXd& x) const;
  Eigen::VectorXd score_rows(const Eigen::MatrixXd& x) const;

  double sigma() const { return sigma_; }
  double jitter() const { return jitter_; }
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  Eigen::MatrixXd train_;
  double sigma_ = 1.0;
  double jitter_ = 0.0;
  Eigen::VectorXd weights_;  // (K + jitter I)^{-1} 1
};

GpModel gp_fit(const Eigen::MatrixXd& x, double sigma,
               double initial_jitter = 1e-6);

}  // namespace lpfusion::learners
