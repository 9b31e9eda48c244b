#include "learners/svdd.hpp"

#include <stdexcept>

#include "learners/kernel.hpp"
#include "solver/frank_wolfe.hpp"

namespace lpfusion::learners {

SvddModel::SvddModel(Eigen::MatrixXd train, double sigma, int max_iters)
    : train_(std::move(train)), sigma_(sigma) {
  const Eigen::Index n = train_.rows();
  if (n < 1) {
    throw std::invalid_argument("svdd_fit: empty training matrix");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("svdd_fit: max_iters must be >= 1");
  }

  const Eigen::MatrixXd k = rbf_kernel_matrix(train_, train_, sigma_);
  const Eigen::VectorXd diag = k.diagonal();

  alpha_ = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd k_alpha = k * alpha_;

  for (int t = 1; t <= max_iters; ++t) {
    const Eigen::VectorXd grad = diag - 2.0 * k_alpha;
    Eigen::Index best = 0;
    grad.maxCoeff(&best);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (grad[i] == grad[best]) {
        best = i;
        break;
      }
    }
    const double gap = grad[best] - grad.dot(alpha_);
    if (gap <= 1e-12) {
      break;
    }
    const double gamma = solver::fw_step_size(t);
    alpha_ *= 1.0 - gamma;
    alpha_[best] += gamma;
    k_alpha = (1.0 - gamma) * k_alpha + gamma * k.col(best);
  }

  center_norm_sq_ = alpha_.dot(k * alpha_);
  dual_objective_ = diag.dot(alpha_) - center_norm_sq_;
}

double SvddModel::score(const Eigen::VectorXd& x) const {
  if (alpha_.size() == 0) {
    throw std::invalid_argument("svdd: model is not fitted");
  }
  double cross = 0.0;
  for (Eigen::Index j = 0; j < train_.rows(); ++j) {
    cross += alpha_[j] * rbf_kernel(x, train_.row(j).transpose(), sigma_);
  }
  return std::max(0.0, 1.0 - 2.0 * cross + center_norm_sq_);
}

Eigen::VectorXd SvddModel::score_rows(const Eigen::MatrixXd& x) const {
  if (alpha_.size() == 0) {
    throw std::invalid_argument("svdd: model is not fitted");
  }
  const Eigen::MatrixXd kmat = rbf_kernel_matrix(x, train_, sigma_);
  return (1.0 - 2.0 * (kmat * alpha_).array() + center_norm_sq_).max(0.0);
}

SvddModel svdd_fit(const Eigen::MatrixXd& x, double sigma, int max_iters) {
  return SvddModel(x, sigma, max_iters);
}

}  // namespace lpfusion::learners
