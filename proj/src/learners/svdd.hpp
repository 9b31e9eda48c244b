#pragma once

#include <Eigen/Dense>

namespace lpfusion::learners {

// Support Vector Data Description, hard-margin dual
//   max_alpha  sum_i alpha_i K_ii - alpha^T K alpha   s.t. alpha in simplex,
// solved by Frank-Wolfe over the unit simplex (vertex at the argmax
// gradient coordinate, open-loop 2/(2+t) steps). The novelty score of a
// point is its squared feature-space distance to the learned center.
class SvddModel {
 public:
  SvddModel() = default;
  SvddModel(Eigen::MatrixXd train, double sigma, int max_iters);

  double score(const Eigen::VectorXd& x) const;
  Eigen::VectorXd score_rows(const Eigen::MatrixXd& x) const;

  const Eigen::VectorXd& alpha() const { return alpha_; }
  double dual_objective() const { return dual_objective_; }
  double sigma() const { return sigma_; }

 private:
  Eigen::MatrixXd train_;
  double sigma_ = 1.0;
  Eigen::VectorXd alpha_;
  double center_norm_sq_ = 0.0;  // alpha^T K alpha
  double dual_objective_ = 0.0;
};

SvddModel svdd_fit(const Eigen::MatrixXd& x, double sigma,
                   int max_iters = 200);

}  // namespace lpfusion::learners
